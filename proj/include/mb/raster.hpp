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
#include <span>
#include <string>
#include <vector>

#include "mb/errors.hpp"

namespace mb {

/// Gray-level image on a rectangular grid. Pixel (x, y) is a sample at
/// integer coordinates; values are real so that synthetic images and
/// affine contrast changes u -> a*u + b stay representable.
///
/// Iso levels are placed at half-step offsets, lambda_j = j*step + step/2,
/// so a level never coincides with a quantized pixel value.
class RasterImage {
public:
    RasterImage(int width, int height, std::vector<double> values, double quantization_step = 1.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double quantization_step() const { return step_; }

    double at(int x, int y) const { return values_[static_cast<size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return values_[static_cast<size_t>(y) * width_ + x]; }
    std::span<const double> values() const { return values_; }

    double min_value() const { return min_; }
    double max_value() const { return max_; }

    /// All levels lambda_j = j*step + step/2 with min(u) < lambda_j < max(u),
    /// ascending. Empty for constant images.
    std::vector<double> quantized_levels() const;

private:
    int width_;
    int height_;
    double step_;
    double min_;
    double max_;
    std::vector<double> values_;
};

/// Loads an 8-bit grayscale PGM (binary "P5" or ASCII "P2").
/// Throws PgmError with a distinct kind for unreadable files, malformed
/// headers and unsupported formats (color PPM, 16-bit data).
RasterImage load_image(const std::string& path, double quantization_step = 1.0);

/// Writes an image as binary PGM, clamping and rounding values to [0,255].
void save_pgm(const RasterImage& image, const std::string& path);

/// |Du| on the dual grid: one magnitude per 2x2 pixel block, at the
/// (width-1) x (height-1) points (i + 1/2, j + 1/2).
class GradientField {
public:
    GradientField(int width_cells, int height_cells, std::vector<double> magnitudes);

    int width() const { return width_; }    // number of dual points per row
    int height() const { return height_; }  // number of dual rows

    double at(int i, int j) const { return mags_[static_cast<size_t>(j) * width_ + i]; }
    std::span<const double> magnitudes() const { return mags_; }
    double max_magnitude() const { return max_; }

    /// Magnitude at the dual point nearest to (x, y), ties toward the larger
    /// index, clamped to the grid (border-closed curves sample outside it).
    double nearest(double x, double y) const;

    /// Flat index of that dual point (row-major).
    size_t nearest_index(double x, double y) const;

private:
    int width_;
    int height_;
    double max_;
    std::vector<double> mags_;
};

/// Finite differences on each 2x2 neighborhood:
///   Dx = (u(i+1,j) + u(i+1,j+1) - u(i,j) - u(i,j+1)) / 2
///   Dy = (u(i,j+1) + u(i+1,j+1) - u(i,j) - u(i+1,j)) / 2
/// magnitude = sqrt(Dx^2 + Dy^2).
GradientField compute_gradient_field(const RasterImage& image);

/// Empirical tail P(X > threshold), binned over [support_min, support_max].
/// tail_values[i] corresponds to bin_edges[i]; a query uses the bin
/// containing it (staircase, right-continuous), so values at bin edges are
/// exact and values inside a bin are conservative upper bounds.
class TailHistogram {
public:
    /// Builds the tail of `samples` over [lo, hi] with `num_bins` uniform
    /// bins. The normalization counts samples strictly above `lo`, so the
    /// tail at the first edge is exactly 1.
    /// When closed_last_edge is set, the final edge stores the fraction of
    /// samples >= hi instead of > hi (captures an atom sitting exactly at
    /// the upper support bound).
    static TailHistogram from_samples(std::span<const double> samples, int num_bins, double lo,
                                      double hi, bool closed_last_edge = false);

    /// Direct construction from explicit edges/tails (tests, synthetic models).
    TailHistogram(std::vector<double> edges, std::vector<double> tails);

    double support_min() const { return edges_.front(); }
    double support_max() const { return edges_.back(); }
    std::span<const double> bin_edges() const { return edges_; }
    std::span<const double> tail_values() const { return tails_; }

    /// P(X > mu), staircase lookup. Queries below the support clamp to 1,
    /// queries at or beyond the last edge return the final tail value.
    double tail(double mu) const;

private:
    std::vector<double> edges_;
    std::vector<double> tails_;
};

/// Tail histogram H_c of |Du| over [min, max] magnitude, normalized by the
/// number of dual points strictly above the minimum.
/// Throws DegenerateHistogramError when all magnitudes are equal; callers
/// then treat every curve as non-meaningful by contrast.
TailHistogram build_contrast_histogram(const GradientField& field, int num_bins = 1024);

}  // namespace mb
