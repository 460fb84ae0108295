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

#include <span>
#include <vector>

#include "mb/saliency.hpp"

namespace mb {

/// Monte-Carlo summary for one detector under the noise hypothesis.
/// Everything except wall_time_seconds is a deterministic function of the
/// seeds and parameters.
struct TrialReport {
    Detector detector = Detector::DmmMcb;
    double eps = 1.0;
    std::vector<uint64_t> seeds;
    std::vector<uint64_t> counts;  // meaningful detections per trial, pre-pruning
    std::vector<uint64_t> n_ll;    // level lines per trial
    double mean = 0.0;
    double bound = 0.0;  // eps + 3*sqrt(eps/trials)
    bool ok = false;     // mean <= bound
    double wall_time_seconds = 0.0;

    bool same_statistics(const TrialReport& other) const {
        return detector == other.detector && eps == other.eps && seeds == other.seeds &&
               counts == other.counts && n_ll == other.n_ll && mean == other.mean &&
               bound == other.bound && ok == other.ok;
    }
};

/// Per-trial meaningful counts for several detectors sharing one pipeline
/// run (noise image, gradients, level lines and profiles are computed once).
struct TrialCounts {
    uint64_t n_ll = 0;
    std::vector<uint64_t> counts;  // parallel to the detector list
};

/// One noise trial: Gaussian image (mean 128, sigma, clamped to [0,255]),
/// full detection pipeline, count of meaningful detections before pruning.
/// `model` is required by the regularity-based detectors.
uint64_t run_h0_trial(uint64_t seed, int size, double sigma, Detector detector,
                      const DetectorParams& params, const RegularityModel* model);

TrialCounts run_h0_trial_multi(uint64_t seed, int size, double sigma,
                               std::span<const Detector> detectors, const DetectorParams& params,
                               const RegularityModel* model);

/// Mean meaningful-detection count over independent trials (seeds
/// base_seed + i, run in parallel, aggregated in trial order) checked
/// against the conservative slack eps + 3*sqrt(eps/trials).
TrialReport estimate_empirical_nfa_bound(int trials, Detector detector, double eps, int size,
                                         double sigma, uint64_t base_seed,
                                         const DetectorParams& params,
                                         const RegularityModel* model);

/// Same, for several detectors over one shared set of pipeline runs.
std::vector<TrialReport> estimate_empirical_nfa_bounds(int trials,
                                                       std::span<const Detector> detectors,
                                                       double eps, int size, double sigma,
                                                       uint64_t base_seed,
                                                       const DetectorParams& params,
                                                       const RegularityModel* model);

}  // namespace mb
