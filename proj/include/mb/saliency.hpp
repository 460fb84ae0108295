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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mb/stats.hpp"
#include "mb/topo_map.hpp"

namespace mb {

/// The six boundary detectors: whole-curve minimum statistics (DMM) and
/// their binomial-tail partial-saliency relaxations (TMA), each driven by
/// contrast (MCB), regularity (MRB) or both in competition (MCRB).
enum class Detector { DmmMcb, TmaMcb, DmmMrb, DmmMcrb, TmaMrb, TmaMcrb };

inline constexpr Detector kAllDetectors[] = {Detector::DmmMcb,  Detector::TmaMcb,
                                             Detector::DmmMrb,  Detector::DmmMcrb,
                                             Detector::TmaMrb,  Detector::TmaMcrb};

std::string detector_name(Detector d);
std::optional<Detector> parse_detector(std::string_view name);
bool detector_uses_contrast(Detector d);
bool detector_uses_regularity(Detector d);

/// K / K_c / K_s given either as a percentile of the curve's sample count
/// (floor-rounded) or as an absolute count; always clamped to [1, n].
struct KSpec {
    bool percent = true;
    double value = 50.0;

    uint32_t resolve(uint32_t n) const;
};

struct DetectorParams {
    double eps = 1.0;
    KSpec K{};
    KSpec Kc{};
    KSpec Ks{};
    double s = 5.0;                  // regularity arc scale
    bool literal_k_indexing = false; // study flag: pass k instead of n-k to the tail
    int histogram_bins = 1024;
};

/// Per-curve saliency statistics: sorted contrast and regularity values at
/// the sampled points plus the tail normalization factors l/(2n), l/(2sn),
/// capped at 1 so the binomial mass never exceeds the observation count.
/// Contrast values are deduplicated per dual-grid point first (short loops
/// can sample one 2x2 stencil twice, which would double-count a draw under
/// the background model).
struct CurveProfile {
    int32_t line_id = -1;
    uint32_t n = 0;   // sampled points on the curve
    double l = 0.0;   // statistical (iso-arc) length
    std::vector<double> mu;   // |Du| per distinct dual point, ascending
    std::vector<double> rho;  // R_s at samples, ascending; empty if l <= 2s
                              // or the line is closed along the border
    double lsn2 = 0.0;   // min(l / (2 |mu|), 1)
    double lsn2s = 0.0;  // min(l / (2 s |rho|), 1)

    bool has_contrast() const { return !mu.empty(); }
    bool has_regularity() const { return !rho.empty(); }
};

/// |Du| at the dual point nearest each sampled point, sorted ascending.
/// Curves with fewer than two samples get an empty (absent) profile.
CurveProfile curve_contrast_profile(const LevelLine& line, const GradientField& field);

/// R_s at each sampled point, sorted ascending; requires l > 2s.
CurveProfile curve_regularity_profile(const LevelLine& line, double s);

/// Fills whichever parts are requested (field may be null when contrast is
/// not needed).
CurveProfile build_profile(const LevelLine& line, const GradientField* field, double s,
                           bool need_contrast, bool need_regularity);

struct Detection {
    int32_t line_id = -1;
    Detector detector = Detector::DmmMcb;
    double log10_nfa = 0.0;  // +inf when not applicable
    bool meaningful = false;
    bool applicable = true;
    bool maximal = false;  // set by maximality pruning
};

/// log10 NFA relative to the number of tests: the full score is
/// log10(N_ll) + value. Lines that cannot be scored (missing profile,
/// degenerate statistics) are flagged not applicable.
struct PartialScore {
    double value = 0.0;
    bool applicable = false;
};

PartialScore partial_score(const CurveProfile& profile, Detector detector,
                           const DetectorParams& params, const TailHistogram* hc,
                           const RegularityModel* model);

Detection nfa_dmm_mcb(const CurveProfile& p, const TailHistogram& hc, uint64_t n_ll,
                      double eps = 1.0);
Detection nfa_tma_mcb(const CurveProfile& p, const TailHistogram& hc, uint64_t n_ll, KSpec K,
                      double eps = 1.0, bool literal_k = false);
Detection nfa_dmm_mrb(const CurveProfile& p, const RegularityModel& model, uint64_t n_ll,
                      double eps = 1.0);
Detection nfa_dmm_mcrb(const CurveProfile& p, const TailHistogram& hc,
                       const RegularityModel& model, uint64_t n_ll, double eps = 1.0);
Detection nfa_tma_mrb(const CurveProfile& p, const RegularityModel& model, uint64_t n_ll, KSpec Ks,
                      double eps = 1.0, bool literal_k = false);
Detection nfa_tma_mcrb(const CurveProfile& p, const TailHistogram& hc,
                       const RegularityModel& model, uint64_t n_ll, KSpec Kc, KSpec Ks,
                       double eps = 1.0, bool literal_k = false);

/// Scores every line of the tree with one detector: exactly one Detection
/// per line, ordered by line id, meaningful flags set against params.eps.
/// Component errors mark the affected line not applicable instead of
/// aborting the run. `hc` may be null (degenerate contrast statistics);
/// `model` is required by the regularity detectors.
std::vector<Detection> detect_boundaries(const LevelLineTree& tree, const GradientField& field,
                                         Detector detector, const DetectorParams& params,
                                         const TailHistogram* hc, const RegularityModel* model);

}  // namespace mb
