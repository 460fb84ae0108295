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

#include "mb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "mb/topo_map.hpp"

namespace mb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double x, double y) {
    if (x == kNegInf)
        return y;
    if (y == kNegInf)
        return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

}  // namespace

Log10Prob Log10Prob::zero() { return {kNegInf}; }

Log10Prob Log10Prob::from_linear(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error("Log10Prob: probability out of [0,1]");
    return {p == 0.0 ? kNegInf : std::log10(p)};
}

bool Log10Prob::is_zero() const { return log10_value == kNegInf; }

double Log10Prob::linear() const { return is_zero() ? 0.0 : std::pow(10.0, log10_value); }

Log10Prob binomial_tail_exact(int64_t N, int64_t k, double p) {
    if (N < 0 || k < 0 || k > N || N > 1000000)
        throw Error("binomial_tail_exact: arguments out of range");
    if (!(p >= 0.0 && p <= 1.0))
        throw Error("binomial_tail_exact: p out of [0,1]");
    if (k == 0 || p == 1.0)
        return Log10Prob::one();
    if (p == 0.0)
        return Log10Prob::zero();

    const double lnp = std::log(p);
    const double lnq = std::log1p(-p);
    // first term at j = k, then the ratio recurrence
    //   t_{j+1} / t_j = (N-j)/(j+1) * p/(1-p)
    double lnterm = std::lgamma(static_cast<double>(N) + 1.0) -
                    std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(N - k) + 1.0) + k * lnp + (N - k) * lnq;
    double lnsum = lnterm;
    const double mode = p * static_cast<double>(N);
    for (int64_t j = k + 1; j <= N; ++j) {
        lnterm += std::log(static_cast<double>(N - j + 1) / static_cast<double>(j)) + lnp - lnq;
        lnsum = logaddexp(lnsum, lnterm);
        // past the mode the terms decay geometrically; the remaining
        // (N - j) terms contribute less than (N - j) e^lnterm
        if (static_cast<double>(j) > mode && lnterm - lnsum < -60.0)
            break;
    }
    return {std::min(0.0, lnsum / M_LN10)};
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 4000;
    constexpr double kEps = 1e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin)
        d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin)
            d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin)
            c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin)
            d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin)
            c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            return h;
    }
    return h;  // converged to working precision in practice
}

}  // namespace

double log10_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("log10_inc_beta: a and b must be positive");
    if (x <= 0.0)
        return kNegInf;
    if (x >= 1.0)
        return 0.0;

    const double ln_pre = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double ln_i = ln_pre - std::log(a) + std::log(beta_cont_frac(a, b, x));
        return std::min(0.0, ln_i / M_LN10);
    }
    // I(x; a, b) = 1 - I(1-x; b, a); the complement is evaluated on the
    // fast-converging side, so it stays bounded away from 1
    const double ln_q = ln_pre - std::log(b) + std::log(beta_cont_frac(b, a, 1.0 - x));
    const double q = std::exp(ln_q);
    if (q >= 1.0)
        return kNegInf;
    return std::log1p(-q) / M_LN10;
}

Log10Prob binomial_tail_interpolated(double n, double k, double p) {
    if (!std::isfinite(n) || !std::isfinite(k) || !std::isfinite(p))
        throw Error("binomial_tail_interpolated: non-finite argument");
    if (k < 0.0 || k > n)
        throw Error("binomial_tail_interpolated: need 0 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0))
        throw Error("binomial_tail_interpolated: p out of [0,1]");
    if (k == 0.0)
        return Log10Prob::one();
    if (p == 0.0)
        return Log10Prob::zero();
    if (p == 1.0)
        return Log10Prob::one();
    const double a = k, b = n - k + 1.0;
    if (b == 1.0)
        return {a * std::log10(p)};  // I(p; a, 1) = p^a
    return {log10_inc_beta(p, a, b)};
}

RasterImage gaussian_noise_image(int size, double sigma, uint64_t seed, double quantization_step) {
    if (size < 2)
        throw Error("gaussian_noise_image: size must be >= 2");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> values(static_cast<size_t>(size) * size);
    for (double& v : values) {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        v = std::clamp(std::round(128.0 + sigma * g), 0.0, 255.0);
    }
    return RasterImage(size, size, std::move(values), quantization_step);
}

RegularityModel estimate_regularity_model(const RegularityModelParams& params) {
    if (!(params.s >= 1.0))
        throw Error("estimate_regularity_model: s must be >= 1");
    if (params.noise_size < 64)
        throw Error("estimate_regularity_model: noise_size must be >= 64");
    if (params.num_bins < 2)
        throw Error("estimate_regularity_model: num_bins must be >= 2");

    const RasterImage noise = gaussian_noise_image(params.noise_size, params.sigma, params.seed);
    std::vector<double> samples;
    for_each_level_line(noise, [&](LevelLine&& line) {
        if (line.euclidean_length > 2.0 * params.s) {
            for (double r : regularity_values(line, params.s))
                samples.push_back(r);
        }
    });
    if (samples.size() < 10000)
        throw InsufficientSamplesError("estimate_regularity_model: only " +
                                       std::to_string(samples.size()) + " samples (< 1e4)");

    RegularityModel model{params.s,
                          TailHistogram::from_samples(samples, params.num_bins, 0.0, 1.0,
                                                      /*closed_last_edge=*/true),
                          params.noise_size,
                          params.sigma,
                          params.seed,
                          params.num_bins,
                          samples.size()};
    return model;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string header_for(const RegularityModelParams& p) {
    std::ostringstream os;
    os << "HS v1 s=" << fmt_double(p.s) << " size=" << p.noise_size
       << " sigma=" << fmt_double(p.sigma) << " seed=" << p.seed << " bins=" << p.num_bins;
    return os.str();
}

}  // namespace

std::string regularity_cache_name(const RegularityModelParams& p) {
    std::ostringstream os;
    os << "hs_s" << fmt_double(p.s) << "_n" << p.noise_size << "_sig" << fmt_double(p.sigma)
       << "_seed" << p.seed << "_b" << p.num_bins << ".txt";
    return os.str();
}

void save_regularity_model(const RegularityModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("save_regularity_model: cannot write '" + path + "'");
    const RegularityModelParams p{model.s, model.noise_size, model.sigma, model.seed,
                                  model.num_bins};
    out << header_for(p) << " samples=" << model.sample_count << "\n";
    const auto edges = model.histogram.bin_edges();
    const auto tails = model.histogram.tail_values();
    for (size_t i = 0; i < edges.size(); ++i)
        out << fmt_double(edges[i]) << " " << fmt_double(tails[i]) << "\n";
}

std::optional<RegularityModel> load_regularity_model(const std::string& path,
                                                     const RegularityModelParams& params) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::string header;
    if (!std::getline(in, header))
        return std::nullopt;
    const std::string expect = header_for(params);
    if (header.rfind(expect + " samples=", 0) != 0)
        return std::nullopt;  // mismatched parameters: regenerate, never reuse
    uint64_t samples = 0;
    try {
        samples = std::stoull(header.substr(expect.size() + 9));
    } catch (const std::exception&) {
        return std::nullopt;
    }

    std::vector<double> edges, tails;
    double e, t;
    while (in >> e >> t) {
        edges.push_back(e);
        tails.push_back(t);
    }
    if (edges.size() != static_cast<size_t>(params.num_bins) + 1)
        return std::nullopt;
    return RegularityModel{params.s,          TailHistogram(std::move(edges), std::move(tails)),
                           params.noise_size, params.sigma,
                           params.seed,       params.num_bins,
                           samples};
}

RegularityModel load_or_estimate_regularity_model(const std::string& cache_dir,
                                                  const RegularityModelParams& params, bool* hit) {
    std::filesystem::create_directories(cache_dir);
    const std::string path = cache_dir + "/" + regularity_cache_name(params);
    if (auto model = load_regularity_model(path, params)) {
        if (hit)
            *hit = true;
        return *model;
    }
    if (hit)
        *hit = false;
    RegularityModel model = estimate_regularity_model(params);
    save_regularity_model(model, path);
    return model;
}

}  // namespace mb
