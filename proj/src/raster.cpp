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

#include "mb/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace mb {

RasterImage::RasterImage(int width, int height, std::vector<double> values, double quantization_step)
    : width_(width), height_(height), step_(quantization_step), values_(std::move(values)) {
    if (width < 2 || height < 2)
        throw Error("RasterImage: width and height must be >= 2");
    if (values_.size() != static_cast<size_t>(width) * height)
        throw Error("RasterImage: value count does not match dimensions");
    if (!(step_ > 0.0))
        throw Error("RasterImage: quantization step must be > 0");
    min_ = std::numeric_limits<double>::infinity();
    max_ = -std::numeric_limits<double>::infinity();
    for (double v : values_) {
        if (!std::isfinite(v))
            throw Error("RasterImage: non-finite pixel value");
        min_ = std::min(min_, v);
        max_ = std::max(max_, v);
    }
}

std::vector<double> RasterImage::quantized_levels() const {
    std::vector<double> levels;
    if (!(min_ < max_))
        return levels;
    // smallest j with j*step + step/2 > min
    long long j = static_cast<long long>(std::floor(min_ / step_ - 0.5)) + 1;
    while (j * step_ + step_ / 2.0 <= min_)
        ++j;
    for (; j * step_ + step_ / 2.0 < max_; ++j)
        levels.push_back(j * step_ + step_ / 2.0);
    return levels;
}

namespace {

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c) && c != '#')
        tok.push_back(static_cast<char>(c));
    if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
    }
    return tok;
}

long parse_header_int(std::istream& in, const char* what) {
    std::string tok = next_token(in);
    if (tok.empty())
        throw PgmError(PgmError::Kind::MalformedHeader, std::string("pgm: missing ") + what);
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw PgmError(PgmError::Kind::MalformedHeader,
                       std::string("pgm: bad ") + what + " '" + tok + "'");
    }
}

}  // namespace

RasterImage load_image(const std::string& path, double quantization_step) {
    if (!(quantization_step > 0.0))
        throw Error("load_image: quantization step must be > 0");
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PgmError(PgmError::Kind::UnreadableFile, "pgm: cannot open '" + path + "'");

    std::string magic = next_token(in);
    bool binary;
    if (magic == "P5") {
        binary = true;
    } else if (magic == "P2") {
        binary = false;
    } else if (magic == "P3" || magic == "P6") {
        throw PgmError(PgmError::Kind::UnsupportedFormat, "pgm: color PPM not supported: " + path);
    } else {
        throw PgmError(PgmError::Kind::MalformedHeader, "pgm: bad magic '" + magic + "'");
    }

    long w = parse_header_int(in, "width");
    long h = parse_header_int(in, "height");
    long maxval = parse_header_int(in, "maxval");
    if (w < 2 || h < 2 || w > 1 << 20 || h > 1 << 20)
        throw PgmError(PgmError::Kind::MalformedHeader, "pgm: bad dimensions");
    if (maxval <= 0 || maxval > 255)
        throw PgmError(PgmError::Kind::UnsupportedFormat, "pgm: only 8-bit grayscale supported");

    std::vector<double> values;
    values.reserve(static_cast<size_t>(w) * h);
    if (binary) {
        // exactly one whitespace byte after maxval, then raw data
        std::vector<unsigned char> buf(static_cast<size_t>(w) * h);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<size_t>(in.gcount()) != buf.size())
            throw PgmError(PgmError::Kind::TruncatedData, "pgm: truncated pixel data");
        for (unsigned char b : buf) {
            if (b > maxval)
                throw PgmError(PgmError::Kind::MalformedHeader, "pgm: sample exceeds maxval");
            values.push_back(static_cast<double>(b));
        }
    } else {
        for (long i = 0; i < w * h; ++i) {
            long v = parse_header_int(in, "sample");
            if (v < 0 || v > maxval)
                throw PgmError(PgmError::Kind::MalformedHeader, "pgm: sample out of range");
            values.push_back(static_cast<double>(v));
        }
    }
    return RasterImage(static_cast<int>(w), static_cast<int>(h), std::move(values), quantization_step);
}

void save_pgm(const RasterImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw PgmError(PgmError::Kind::UnreadableFile, "pgm: cannot write '" + path + "'");
    out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            double v = std::round(image.at(x, y));
            v = std::clamp(v, 0.0, 255.0);
            out.put(static_cast<char>(static_cast<unsigned char>(v)));
        }
}

GradientField::GradientField(int width_cells, int height_cells, std::vector<double> magnitudes)
    : width_(width_cells), height_(height_cells), mags_(std::move(magnitudes)) {
    if (width_ < 1 || height_ < 1 || mags_.size() != static_cast<size_t>(width_) * height_)
        throw Error("GradientField: bad dimensions");
    max_ = 0.0;
    for (double m : mags_) {
        if (!(m >= 0.0))
            throw Error("GradientField: negative magnitude");
        max_ = std::max(max_, m);
    }
}

size_t GradientField::nearest_index(double x, double y) const {
    // dual point i maps to coordinate i + 1/2
    int i = static_cast<int>(std::llround(x - 0.5));
    int j = static_cast<int>(std::llround(y - 0.5));
    i = std::clamp(i, 0, width_ - 1);
    j = std::clamp(j, 0, height_ - 1);
    return static_cast<size_t>(j) * width_ + i;
}

double GradientField::nearest(double x, double y) const { return mags_[nearest_index(x, y)]; }

GradientField compute_gradient_field(const RasterImage& image) {
    const int w = image.width(), h = image.height();
    std::vector<double> mags(static_cast<size_t>(w - 1) * (h - 1));
    for (int j = 0; j < h - 1; ++j) {
        for (int i = 0; i < w - 1; ++i) {
            const double a = image.at(i, j), b = image.at(i + 1, j);
            const double c = image.at(i, j + 1), d = image.at(i + 1, j + 1);
            const double dx = (b + d - a - c) / 2.0;
            const double dy = (c + d - a - b) / 2.0;
            mags[static_cast<size_t>(j) * (w - 1) + i] = std::hypot(dx, dy);
        }
    }
    return GradientField(w - 1, h - 1, std::move(mags));
}

TailHistogram::TailHistogram(std::vector<double> edges, std::vector<double> tails)
    : edges_(std::move(edges)), tails_(std::move(tails)) {
    if (edges_.size() < 2 || edges_.size() != tails_.size())
        throw Error("TailHistogram: need matching edges/tails, at least 2");
    for (size_t i = 0; i + 1 < edges_.size(); ++i) {
        if (!(edges_[i] < edges_[i + 1]))
            throw Error("TailHistogram: edges must be strictly ascending");
        if (tails_[i + 1] > tails_[i] + 1e-12)
            throw Error("TailHistogram: tail must be non-increasing");
    }
    for (double t : tails_)
        if (!(t >= 0.0 && t <= 1.0))
            throw Error("TailHistogram: tail values must lie in [0,1]");
}

TailHistogram TailHistogram::from_samples(std::span<const double> samples, int num_bins, double lo,
                                          double hi, bool closed_last_edge) {
    if (num_bins < 2)
        throw Error("TailHistogram: num_bins must be >= 2");
    if (!(lo < hi))
        throw Error("TailHistogram: empty support");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    const size_t above_lo =
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lo);
    if (above_lo == 0)
        throw DegenerateHistogramError("TailHistogram: no sample above the lower support bound");
    const double denom = static_cast<double>(above_lo);

    std::vector<double> edges(static_cast<size_t>(num_bins) + 1);
    std::vector<double> tails(static_cast<size_t>(num_bins) + 1);
    const double width = hi - lo;
    for (int i = 0; i <= num_bins; ++i) {
        const double e = (i == num_bins) ? hi : lo + width * i / num_bins;
        edges[i] = e;
        const size_t above = (closed_last_edge && i == num_bins)
                                 ? sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), e)
                                 : sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), e);
        tails[i] = std::min(1.0, static_cast<double>(above) / denom);
    }
    return TailHistogram(std::move(edges), std::move(tails));
}

double TailHistogram::tail(double mu) const {
    if (mu <= edges_.front())
        return tails_.front();
    if (mu >= edges_.back())
        return tails_.back();
    const int bins = static_cast<int>(edges_.size()) - 1;
    const double width = edges_.back() - edges_.front();
    int idx = static_cast<int>((mu - edges_.front()) / width * bins);
    idx = std::clamp(idx, 0, bins - 1);
    // FP guard: make sure mu really falls inside bin idx
    while (idx > 0 && mu < edges_[idx])
        --idx;
    while (idx < bins - 1 && mu >= edges_[idx + 1])
        ++idx;
    return tails_[idx];
}

TailHistogram build_contrast_histogram(const GradientField& field, int num_bins) {
    if (field.magnitudes().empty())
        throw Error("build_contrast_histogram: empty field");
    double lo = field.magnitudes()[0], hi = lo;
    for (double m : field.magnitudes()) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (!(lo < hi))
        throw DegenerateHistogramError("build_contrast_histogram: all magnitudes equal");
    return TailHistogram::from_samples(field.magnitudes(), num_bins, lo, hi);
}

}  // namespace mb
