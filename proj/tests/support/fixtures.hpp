// Synthetic images and curves shared by the test suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mb/raster.hpp"
#include "mb/topo_map.hpp"

namespace fixtures {

inline mb::RasterImage constant(int w, int h, double v, double step = 1.0) {
    return mb::RasterImage(w, h, std::vector<double>(static_cast<size_t>(w) * h, v), step);
}

/// Left half `lo`, right half `hi` (vertical split).
inline mb::RasterImage two_tone(int w, int h, double lo = 0.0, double hi = 255.0) {
    std::vector<double> v(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            v[static_cast<size_t>(y) * w + x] = x < w / 2 ? lo : hi;
    return mb::RasterImage(w, h, std::move(v), 1.0);
}

/// Single bright pixel on a flat background.
inline mb::RasterImage single_peak(int size, int px, int py, double value = 255.0) {
    std::vector<double> v(static_cast<size_t>(size) * size, 0.0);
    v[static_cast<size_t>(py) * size + px] = value;
    return mb::RasterImage(size, size, std::move(v), 1.0);
}

/// Radial cone: `v_hi` inside r0, linear taper to `v_lo` at r1, flat outside.
/// Produces one nested bundle of circular level lines per gray level.
inline mb::RasterImage disk_cone(int size = 64, double r0 = 6.0, double r1 = 26.0,
                                 double v_lo = 20.0, double v_hi = 230.0) {
    std::vector<double> v(static_cast<size_t>(size) * size);
    const double c = (size - 1) / 2.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double r = std::hypot(x - c, y - c);
            double t = (r - r0) / (r1 - r0);
            t = std::clamp(t, 0.0, 1.0);
            v[static_cast<size_t>(y) * size + x] = std::round(v_hi + t * (v_lo - v_hi));
        }
    return mb::RasterImage(size, size, std::move(v), 1.0);
}

/// Bright ring: levels rise from the background to a flat crest annulus and
/// fall again toward the center. The plateau keeps every upper level set a
/// connected annulus, so each level contributes exactly one outer and one
/// inner line.
inline mb::RasterImage ring(int size = 48, double crest = 12.0, double plateau = 3.0,
                            double taper = 6.0, double v_hi = 200.0) {
    std::vector<double> v(static_cast<size_t>(size) * size);
    const double c = (size - 1) / 2.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double r = std::hypot(x - c, y - c);
            const double t = std::clamp((plateau + taper - std::abs(r - crest)) / taper, 0.0, 1.0);
            v[static_cast<size_t>(y) * size + x] = std::round(v_hi * t);
        }
    return mb::RasterImage(size, size, std::move(v), 1.0);
}

/// Deterministic pseudo-natural scene: a ramp, three smooth blobs and mild
/// hash-based speckle. Yields hundreds of level lines of varied contrast.
inline mb::RasterImage scene(int w = 96, int h = 96, double step = 1.0) {
    auto hash01 = [](uint32_t x, uint32_t y) {
        uint32_t v = x * 0x9E3779B9u ^ (y + 0x7F4A7C15u) * 0x85EBCA6Bu;
        v ^= v >> 16;
        v *= 0x2C1B3C6Du;
        v ^= v >> 12;
        return static_cast<double>(v & 0xffffu) / 65535.0;
    };
    struct Blob {
        double cx, cy, sigma, amp;
    };
    const Blob blobs[] = {{0.30, 0.35, 8.0, 95.0}, {0.70, 0.60, 11.0, -70.0}, {0.55, 0.20, 6.0, 60.0}};
    std::vector<double> v(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double u = 70.0 + 80.0 * x / (w - 1) + 10.0 * std::sin(2.0 * M_PI * y / 31.0);
            for (const Blob& b : blobs) {
                const double dx = x - b.cx * w, dy = y - b.cy * h;
                u += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
            }
            u += 6.0 * (hash01(x, y) - 0.5);
            v[static_cast<size_t>(y) * w + x] = std::clamp(std::round(u), 0.0, 255.0);
        }
    return mb::RasterImage(w, h, std::move(v), step);
}

/// Affine contrast change a*u + b with a matching quantization step, so the
/// level family maps bijectively onto the original one.
inline mb::RasterImage affine_map(const mb::RasterImage& img, double a, double b) {
    std::vector<double> v(img.values().begin(), img.values().end());
    for (double& x : v)
        x = a * x + b;
    return mb::RasterImage(img.width(), img.height(), std::move(v), a * img.quantization_step());
}

/// Closed synthetic line over raw vertices: samples every second vertex,
/// length over the closing polygon. For profile/regularity tests.
inline mb::LevelLine synthetic_line(std::vector<mb::Vec2> pts, int32_t id = 0, double level = 0.5) {
    mb::LevelLine line;
    line.id = id;
    line.level = level;
    line.polyline = std::move(pts);
    line.num_crossings = static_cast<uint32_t>(line.polyline.size());
    for (uint32_t i = 0; i < line.num_crossings; i += 2)
        line.sample_idx.push_back(i);
    if (line.num_crossings % 2 == 1)
        line.sample_idx.pop_back();  // n = floor(m/2)
    double len = 0.0;
    for (size_t i = 0; i < line.polyline.size(); ++i) {
        const mb::Vec2& p = line.polyline[i];
        const mb::Vec2& q = line.polyline[(i + 1) % line.polyline.size()];
        len += std::hypot(q.x - p.x, q.y - p.y);
    }
    line.euclidean_length = len;
    line.arc_length = len;
    return line;
}

inline std::vector<mb::Vec2> regular_polygon(double cx, double cy, double r, int sides) {
    std::vector<mb::Vec2> pts;
    pts.reserve(sides);
    for (int i = 0; i < sides; ++i) {
        const double a = 2.0 * M_PI * i / sides;
        pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    return pts;
}

/// Axis-aligned rectangle outline subdivided into unit-ish steps, so samples
/// land on straight stretches away from the corners.
inline std::vector<mb::Vec2> rectangle_polyline(double x0, double y0, double wid, double hei,
                                                double ds = 1.0) {
    std::vector<mb::Vec2> pts;
    const int nx = std::max(1, static_cast<int>(std::round(wid / ds)));
    const int ny = std::max(1, static_cast<int>(std::round(hei / ds)));
    for (int i = 0; i < nx; ++i)
        pts.push_back({x0 + wid * i / nx, y0});
    for (int i = 0; i < ny; ++i)
        pts.push_back({x0 + wid, y0 + hei * i / ny});
    for (int i = 0; i < nx; ++i)
        pts.push_back({x0 + wid - wid * i / nx, y0 + hei});
    for (int i = 0; i < ny; ++i)
        pts.push_back({x0, y0 + hei - hei * i / ny});
    return pts;
}

}  // namespace fixtures
