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

#include "mb/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

namespace mb {

TrialCounts run_h0_trial_multi(uint64_t seed, int size, double sigma,
                               std::span<const Detector> detectors, const DetectorParams& params,
                               const RegularityModel* model) {
    if (size < 64)
        throw Error("run_h0_trial: size must be >= 64");
    bool need_c = false, need_r = false;
    for (Detector d : detectors) {
        need_c = need_c || detector_uses_contrast(d);
        need_r = need_r || detector_uses_regularity(d);
    }
    if (need_r && model == nullptr)
        throw Error("run_h0_trial: regularity detectors need an H_s model");
    if (need_r && model->s != params.s)
        throw Error("run_h0_trial: model scale does not match params.s");

    const RasterImage noise = gaussian_noise_image(size, sigma, seed);
    const GradientField field = compute_gradient_field(noise);

    std::optional<TailHistogram> hc_storage;
    if (need_c) {
        try {
            hc_storage = build_contrast_histogram(field, params.histogram_bins);
        } catch (const DegenerateHistogramError&) {
            // every curve stays non-meaningful by contrast
        }
    }
    const TailHistogram* hc = hc_storage ? &*hc_storage : nullptr;

    // N_ll is only known once every line has been traced; buffer the partial
    // scores (log10 NFA without the log10 N_ll term) and finish afterwards.
    std::vector<std::vector<double>> partials(detectors.size());
    uint64_t n_ll = 0;
    for_each_level_line(noise, [&](LevelLine&& line) {
        ++n_ll;
        const CurveProfile profile = build_profile(line, need_c ? &field : nullptr, params.s,
                                                   need_c, need_r);
        for (size_t di = 0; di < detectors.size(); ++di) {
            const PartialScore score = partial_score(profile, detectors[di], params, hc, model);
            partials[di].push_back(score.applicable ? score.value
                                                    : std::numeric_limits<double>::infinity());
        }
    });

    TrialCounts out;
    out.n_ll = n_ll;
    out.counts.assign(detectors.size(), 0);
    const double log_nll = n_ll > 0 ? std::log10(static_cast<double>(n_ll)) : 0.0;
    const double log_eps = std::log10(params.eps);
    for (size_t di = 0; di < detectors.size(); ++di)
        for (double partial : partials[di])
            if (log_nll + partial < log_eps)
                ++out.counts[di];
    return out;
}

uint64_t run_h0_trial(uint64_t seed, int size, double sigma, Detector detector,
                      const DetectorParams& params, const RegularityModel* model) {
    const Detector one[] = {detector};
    return run_h0_trial_multi(seed, size, sigma, one, params, model).counts[0];
}

std::vector<TrialReport> estimate_empirical_nfa_bounds(int trials,
                                                       std::span<const Detector> detectors,
                                                       double eps, int size, double sigma,
                                                       uint64_t base_seed,
                                                       const DetectorParams& params,
                                                       const RegularityModel* model) {
    if (trials < 1)
        throw Error("estimate_empirical_nfa_bound: need at least one trial");
    DetectorParams run_params = params;
    run_params.eps = eps;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<TrialCounts> per_trial(trials);
    {
        std::atomic<int> next{0};
        const unsigned workers =
            std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                               static_cast<unsigned>(trials));
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned wi = 0; wi < workers; ++wi)
            pool.emplace_back([&]() {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= trials)
                        return;
                    const uint64_t seed = base_seed + static_cast<uint64_t>(i);
                    try {
                        per_trial[i] = run_h0_trial_multi(seed, size, sigma, detectors,
                                                          run_params, model);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure)
                            failure = std::make_exception_ptr(Error(
                                "trial with seed " + std::to_string(seed) + " failed: " + e.what()));
                        return;
                    }
                }
            });
        for (auto& t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<TrialReport> reports;
    reports.reserve(detectors.size());
    for (size_t di = 0; di < detectors.size(); ++di) {
        TrialReport r;
        r.detector = detectors[di];
        r.eps = eps;
        for (int i = 0; i < trials; ++i) {
            r.seeds.push_back(base_seed + static_cast<uint64_t>(i));
            r.counts.push_back(per_trial[i].counts[di]);
            r.n_ll.push_back(per_trial[i].n_ll);
        }
        double sum = 0.0;
        for (uint64_t c : r.counts)
            sum += static_cast<double>(c);
        r.mean = sum / trials;
        r.bound = eps + 3.0 * std::sqrt(eps / trials);
        r.ok = r.mean <= r.bound;
        r.wall_time_seconds = elapsed;
        reports.push_back(std::move(r));
    }
    return reports;
}

TrialReport estimate_empirical_nfa_bound(int trials, Detector detector, double eps, int size,
                                         double sigma, uint64_t base_seed,
                                         const DetectorParams& params,
                                         const RegularityModel* model) {
    const Detector one[] = {detector};
    return estimate_empirical_nfa_bounds(trials, one, eps, size, sigma, base_seed, params,
                                         model)[0];
}

}  // namespace mb
