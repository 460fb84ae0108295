/*
 * Copyright 2026 The mb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mb/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace mb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string detector_name(Detector d) {
    switch (d) {
        case Detector::DmmMcb: return "dmm-mcb";
        case Detector::TmaMcb: return "tma-mcb";
        case Detector::DmmMrb: return "dmm-mrb";
        case Detector::DmmMcrb: return "dmm-mcrb";
        case Detector::TmaMrb: return "tma-mrb";
        case Detector::TmaMcrb: return "tma-mcrb";
    }
    return "?";
}

std::optional<Detector> parse_detector(std::string_view name) {
    for (Detector d : kAllDetectors)
        if (detector_name(d) == name)
            return d;
    return std::nullopt;
}

bool detector_uses_contrast(Detector d) {
    return d == Detector::DmmMcb || d == Detector::TmaMcb || d == Detector::DmmMcrb ||
           d == Detector::TmaMcrb;
}

bool detector_uses_regularity(Detector d) {
    return d == Detector::DmmMrb || d == Detector::DmmMcrb || d == Detector::TmaMrb ||
           d == Detector::TmaMcrb;
}

uint32_t KSpec::resolve(uint32_t n) const {
    if (n == 0)
        return 0;
    const double raw = percent ? static_cast<double>(n) * value / 100.0 : value;
    const double k = std::floor(raw);
    if (k < 1.0)
        return 1;
    if (k > static_cast<double>(n))
        return n;
    return static_cast<uint32_t>(k);
}

CurveProfile curve_contrast_profile(const LevelLine& line, const GradientField& field) {
    return build_profile(line, &field, 0.0, true, false);
}

CurveProfile curve_regularity_profile(const LevelLine& line, double s) {
    return build_profile(line, nullptr, s, false, true);
}

CurveProfile build_profile(const LevelLine& line, const GradientField* field, double s,
                           bool need_contrast, bool need_regularity) {
    CurveProfile p;
    p.line_id = line.id;
    p.n = line.n();
    p.l = line.statistical_length();
    if (need_contrast && field != nullptr && p.n >= 2) {
        // The background model takes the contrast observations as
        // independent draws, which holds for Gaussian noise only when their
        // 2x2 stencils are pixel-disjoint, i.e. the dual points sit at
        // Chebyshev distance >= 2. Thin the samples greedily in curve order
        // until that holds (short loops would otherwise read one stencil
        // twice and long wiggly curves would re-read neighborhoods).
        std::unordered_set<size_t> kept;
        const int fw = field->width();
        p.mu.reserve(p.n);
        for (uint32_t idx : line.sample_idx) {
            const Vec2& v = line.polyline[idx];
            const size_t cell = field->nearest_index(v.x, v.y);
            const int ci = static_cast<int>(cell % fw), cj = static_cast<int>(cell / fw);
            bool clear = true;
            for (int dj = -1; dj <= 1 && clear; ++dj)
                for (int di = -1; di <= 1 && clear; ++di) {
                    const int ni = ci + di, nj = cj + dj;
                    if (ni < 0 || nj < 0 || ni >= fw || nj >= field->height())
                        continue;
                    if (kept.count(static_cast<size_t>(nj) * fw + ni))
                        clear = false;
                }
            if (clear) {
                kept.insert(cell);
                p.mu.push_back(field->magnitudes()[cell]);
            }
        }
        if (p.mu.size() < 2)
            p.mu.clear();
        std::stable_sort(p.mu.begin(), p.mu.end());
    }
    // Border-closure paths are artifacts of the domain boundary, not image
    // structure; regularity measured across them (long exactly-straight
    // runs) would be compared against a noise model that never produces
    // them. Border-touching lines stay in N_ll but are not scored by the
    // regularity detectors.
    if (need_regularity && p.n >= 2 && s > 0.0 && p.l > 2.0 * s && !line.touches_border) {
        p.rho = regularity_values(line, s);
        std::stable_sort(p.rho.begin(), p.rho.end());
    }
    // Tail normalizations, capped so the total mass never exceeds the number
    // of observed values: unit-spaced digitizations have l = 2n by
    // construction, but bilinear crossing chords can run longer than the
    // sample spacing.
    if (!p.mu.empty())
        p.lsn2 = std::min(p.l / (2.0 * p.mu.size()), 1.0);
    if (!p.rho.empty())
        p.lsn2s = std::min(p.l / (2.0 * s * p.rho.size()), 1.0);
    return p;
}

namespace {

// log10 of the interpolated binomial tail with the curve's normalization:
// total mass `total`, `count` of it above the threshold whose tail
// probability is `prob`.
double tail_term(double total, double count, double prob) {
    return binomial_tail_interpolated(total, count, prob).log10_value;
}

// min over k < K of the contrast tail terms; `literal` switches the count
// argument from (n-k)*lsn (samples above mu_k) to k*lsn as printed in the
// original pseudo-code, which breaks the K=1 identity and is kept for study.
double min_tail_term(const std::vector<double>& sorted_vals, uint32_t K, double lsn, uint32_t n,
                     const TailHistogram& tail, bool literal) {
    double best = kInf;
    for (uint32_t k = 0; k < K; ++k) {
        const double count = literal ? k * lsn : (n - k) * lsn;
        const double term = tail_term(n * lsn, count, tail.tail(sorted_vals[k]));
        best = std::min(best, term);
    }
    return best;
}

Detection make_detection(const CurveProfile& p, Detector d, PartialScore score, uint64_t n_ll,
                         double eps) {
    Detection det;
    det.line_id = p.line_id;
    det.detector = d;
    det.applicable = score.applicable;
    det.log10_nfa = score.applicable ? std::log10(static_cast<double>(n_ll)) + score.value : kInf;
    det.meaningful = det.log10_nfa < std::log10(eps);
    return det;
}

}  // namespace

PartialScore partial_score(const CurveProfile& profile, Detector detector,
                           const DetectorParams& params, const TailHistogram* hc,
                           const RegularityModel* model) {
    const bool need_c = detector_uses_contrast(detector);
    const bool need_r = detector_uses_regularity(detector);
    if (need_c && (hc == nullptr || !profile.has_contrast()))
        return {0.0, false};
    if (need_r && (model == nullptr || !profile.has_regularity()))
        return {0.0, false};

    // effective observation counts and exponents per criterion
    const uint32_t n_c = static_cast<uint32_t>(profile.mu.size());
    const uint32_t n_s = static_cast<uint32_t>(profile.rho.size());
    const double e_c = n_c * profile.lsn2;   // min(l/2, n_c)
    const double e_s = n_s * profile.lsn2s;  // min(l/2s, n_s)

    switch (detector) {
        case Detector::DmmMcb:
            // N_ll * H_c(mu_0)^(l/2)
            return {e_c * std::log10(hc->tail(profile.mu[0])), true};
        case Detector::DmmMrb:
            // N_ll * H_s(rho_0)^(l/2s)
            return {e_s * std::log10(model->tail(profile.rho[0])), true};
        case Detector::DmmMcrb: {
            // N_ll * max(H_c(mu_0)^l, H_s(rho_0)^(l/s)); the two gestalts
            // compete, so the larger (less surprising) term decides
            const double c = 2.0 * e_c * std::log10(hc->tail(profile.mu[0]));
            const double r = 2.0 * e_s * std::log10(model->tail(profile.rho[0]));
            return {std::max(c, r), true};
        }
        case Detector::TmaMcb: {
            const uint32_t K = params.K.resolve(n_c);
            const double m = min_tail_term(profile.mu, K, profile.lsn2, n_c, *hc,
                                           params.literal_k_indexing);
            return {std::log10(static_cast<double>(K)) + m, true};
        }
        case Detector::TmaMrb: {
            const uint32_t Ks = params.Ks.resolve(n_s);
            const double m = min_tail_term(profile.rho, Ks, profile.lsn2s, n_s, model->histogram,
                                           params.literal_k_indexing);
            return {std::log10(static_cast<double>(Ks)) + m, true};
        }
        case Detector::TmaMcrb: {
            const uint32_t Kc = params.Kc.resolve(n_c);
            const uint32_t Ks = params.Ks.resolve(n_s);
            const double mc = min_tail_term(profile.mu, Kc, profile.lsn2, n_c, *hc,
                                            params.literal_k_indexing);
            const double ms = min_tail_term(profile.rho, Ks, profile.lsn2s, n_s, model->histogram,
                                            params.literal_k_indexing);
            return {std::log10(static_cast<double>(Kc)) + std::log10(static_cast<double>(Ks)) +
                        2.0 * std::max(mc, ms),
                    true};
        }
    }
    return {0.0, false};
}

Detection nfa_dmm_mcb(const CurveProfile& p, const TailHistogram& hc, uint64_t n_ll, double eps) {
    DetectorParams params;
    params.eps = eps;
    return make_detection(p, Detector::DmmMcb, partial_score(p, Detector::DmmMcb, params, &hc, nullptr),
                          n_ll, eps);
}

Detection nfa_tma_mcb(const CurveProfile& p, const TailHistogram& hc, uint64_t n_ll, KSpec K,
                      double eps, bool literal_k) {
    DetectorParams params;
    params.eps = eps;
    params.K = K;
    params.literal_k_indexing = literal_k;
    return make_detection(p, Detector::TmaMcb, partial_score(p, Detector::TmaMcb, params, &hc, nullptr),
                          n_ll, eps);
}

Detection nfa_dmm_mrb(const CurveProfile& p, const RegularityModel& model, uint64_t n_ll,
                      double eps) {
    DetectorParams params;
    params.eps = eps;
    params.s = model.s;
    return make_detection(p, Detector::DmmMrb,
                          partial_score(p, Detector::DmmMrb, params, nullptr, &model), n_ll, eps);
}

Detection nfa_dmm_mcrb(const CurveProfile& p, const TailHistogram& hc, const RegularityModel& model,
                       uint64_t n_ll, double eps) {
    DetectorParams params;
    params.eps = eps;
    params.s = model.s;
    return make_detection(p, Detector::DmmMcrb,
                          partial_score(p, Detector::DmmMcrb, params, &hc, &model), n_ll, eps);
}

Detection nfa_tma_mrb(const CurveProfile& p, const RegularityModel& model, uint64_t n_ll, KSpec Ks,
                      double eps, bool literal_k) {
    DetectorParams params;
    params.eps = eps;
    params.s = model.s;
    params.Ks = Ks;
    params.literal_k_indexing = literal_k;
    return make_detection(p, Detector::TmaMrb,
                          partial_score(p, Detector::TmaMrb, params, nullptr, &model), n_ll, eps);
}

Detection nfa_tma_mcrb(const CurveProfile& p, const TailHistogram& hc, const RegularityModel& model,
                       uint64_t n_ll, KSpec Kc, KSpec Ks, double eps, bool literal_k) {
    DetectorParams params;
    params.eps = eps;
    params.s = model.s;
    params.Kc = Kc;
    params.Ks = Ks;
    params.literal_k_indexing = literal_k;
    return make_detection(p, Detector::TmaMcrb,
                          partial_score(p, Detector::TmaMcrb, params, &hc, &model), n_ll, eps);
}

std::vector<Detection> detect_boundaries(const LevelLineTree& tree, const GradientField& field,
                                         Detector detector, const DetectorParams& params,
                                         const TailHistogram* hc, const RegularityModel* model) {
    if (model != nullptr && model->s != params.s)
        throw Error("detect_boundaries: regularity model scale does not match params.s");

    const uint64_t n_ll = tree.size();
    std::vector<Detection> out;
    out.reserve(tree.size());
    const bool need_c = detector_uses_contrast(detector);
    const bool need_r = detector_uses_regularity(detector);

    for (const LevelLine& line : tree.lines) {
        PartialScore score{0.0, false};
        try {
            const CurveProfile profile = build_profile(line, &field, params.s, need_c, need_r);
            score = partial_score(profile, detector, params, hc, model);
        } catch (const Error&) {
            score = {0.0, false};  // per-line failure: mark not applicable
        }
        Detection det;
        det.line_id = line.id;
        det.detector = detector;
        det.applicable = score.applicable;
        det.log10_nfa =
            score.applicable ? std::log10(static_cast<double>(n_ll)) + score.value : kInf;
        det.meaningful = det.log10_nfa < std::log10(params.eps);
        out.push_back(det);
    }
    std::sort(out.begin(), out.end(),
              [](const Detection& a, const Detection& b) { return a.line_id < b.line_id; });
    return out;
}

}  // namespace mb
