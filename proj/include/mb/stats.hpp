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

#include <cstdint>
#include <optional>
#include <string>

#include "mb/raster.hpp"

namespace mb {

/// Probability kept in base-10 log domain. NFA products reach 1e-80 and
/// binomial tails far less, so linear doubles would underflow.
struct Log10Prob {
    double log10_value = 0.0;  // <= 0, -inf encodes an exact zero

    static Log10Prob one() { return {0.0}; }
    static Log10Prob zero();
    static Log10Prob from_linear(double p);

    bool is_zero() const;
    double linear() const;
};

/// Exact binomial tail sum_{j=k}^{N} C(N,j) p^j (1-p)^(N-j), accumulated in
/// log domain so that N up to 1e6 stays finite. Serves as the independent
/// oracle for the interpolated version at integer arguments.
Log10Prob binomial_tail_exact(int64_t N, int64_t k, double p);

/// Continuous interpolation of the binomial tail via the regularized
/// incomplete beta function, I(p; k, n-k+1), evaluated by continued
/// fraction and assembled entirely in log domain. Agrees with
/// binomial_tail_exact at integer (n, k) with k >= 1; k = 0 returns 1 by
/// convention (the tail from zero successes is certain).
Log10Prob binomial_tail_interpolated(double n, double k, double p);

/// log10 of the regularized incomplete beta I(x; a, b) itself (a > 0, b > 0).
double log10_inc_beta(double x, double a, double b);

/// Deterministic Gaussian noise image: mean 128, the given sigma, rounded to
/// integers and clamped to [0, 255]. The generator is a fixed Box-Muller
/// transform over mt19937_64 draws, so identical seeds give identical images.
RasterImage gaussian_noise_image(int size, double sigma, uint64_t seed,
                                 double quantization_step = 1.0);

/// Empirical tail of the regularity R_s over white-noise level lines,
/// binned on [0, 1]. The final bin edge stores the closed tail (fraction of
/// samples exactly at 1), which keeps the straight-window atom conservative.
struct RegularityModel {
    double s = 5.0;
    TailHistogram histogram;
    // provenance
    int noise_size = 512;
    double sigma = 50.0;
    uint64_t seed = 42;
    int num_bins = 1000;
    uint64_t sample_count = 0;

    double tail(double r) const { return histogram.tail(r); }
};

struct RegularityModelParams {
    double s = 5.0;
    int noise_size = 512;
    double sigma = 50.0;
    uint64_t seed = 42;
    int num_bins = 1000;
};

/// Estimates H_s from one noise image: extracts its level lines, computes
/// R_s at every sampled point of every line longer than 2s, and bins the
/// tail. Throws InsufficientSamplesError below 1e4 samples.
RegularityModel estimate_regularity_model(const RegularityModelParams& params);

/// Cache file name for a parameter set, e.g. "hs_s5_n512_sig50_seed42_b1000.txt".
std::string regularity_cache_name(const RegularityModelParams& params);

/// Writes the versioned cache file:
///   "HS v1 s=<s> size=<n> sigma=<sigma> seed=<seed> bins=<b> samples=<c>"
/// followed by one "edge tail" pair per line, ASCII decimal.
void save_regularity_model(const RegularityModel& model, const std::string& path);

/// Loads a cache file, checking the header against `params`. Returns nullopt
/// if the file is absent or keyed differently (callers then regenerate).
std::optional<RegularityModel> load_regularity_model(const std::string& path,
                                                     const RegularityModelParams& params);

/// Loads the cached model from `cache_dir`, estimating and writing it on a
/// miss. `hit` reports whether the cache was reused.
RegularityModel load_or_estimate_regularity_model(const std::string& cache_dir,
                                                  const RegularityModelParams& params,
                                                  bool* hit = nullptr);

}  // namespace mb
