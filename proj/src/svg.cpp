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

#include "mb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <unordered_map>

namespace mb {

namespace {

// Grayscale 8-bit palette BMP, top-down rows. Small and renders everywhere,
// so the overlay stays a single self-contained file.
std::vector<unsigned char> encode_bmp_gray(const RasterImage& img) {
    const int w = img.width(), h = img.height();
    const int stride = (w + 3) & ~3;
    const uint32_t palette_size = 256 * 4;
    const uint32_t data_offset = 14 + 40 + palette_size;
    const uint32_t file_size = data_offset + static_cast<uint32_t>(stride) * h;

    std::vector<unsigned char> out;
    out.reserve(file_size);
    auto u16 = [&](uint16_t v) {
        out.push_back(v & 0xff);
        out.push_back(v >> 8);
    };
    auto u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i)
            out.push_back((v >> (8 * i)) & 0xff);
    };

    out.push_back('B');
    out.push_back('M');
    u32(file_size);
    u32(0);
    u32(data_offset);
    u32(40);                              // BITMAPINFOHEADER
    u32(static_cast<uint32_t>(w));
    u32(static_cast<uint32_t>(-h));       // negative height: top-down rows
    u16(1);
    u16(8);
    u32(0);                               // BI_RGB
    u32(static_cast<uint32_t>(stride) * h);
    u32(2835);
    u32(2835);
    u32(256);
    u32(0);
    for (int i = 0; i < 256; ++i) {
        out.push_back(static_cast<unsigned char>(i));
        out.push_back(static_cast<unsigned char>(i));
        out.push_back(static_cast<unsigned char>(i));
        out.push_back(0);
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = std::clamp(std::round(img.at(x, y)), 0.0, 255.0);
            out.push_back(static_cast<unsigned char>(v));
        }
        for (int x = w; x < stride; ++x)
            out.push_back(0);
    }
    return out;
}

std::string base64(const std::vector<unsigned char>& data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        const uint32_t trip = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(alphabet[(trip >> 18) & 63]);
        out.push_back(alphabet[(trip >> 12) & 63]);
        out.push_back(alphabet[(trip >> 6) & 63]);
        out.push_back(alphabet[trip & 63]);
    }
    if (i + 1 == data.size()) {
        const uint32_t trip = data[i] << 16;
        out.push_back(alphabet[(trip >> 18) & 63]);
        out.push_back(alphabet[(trip >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (i + 2 == data.size()) {
        const uint32_t trip = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(alphabet[(trip >> 18) & 63]);
        out.push_back(alphabet[(trip >> 12) & 63]);
        out.push_back(alphabet[(trip >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

void append_coord(std::string& d, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    d += buf;
}

}  // namespace

const char* nfa_bucket_color(double log10_nfa) {
    if (log10_nfa >= 0.0)
        return "#9e9e9e";
    if (log10_nfa >= -5.0)
        return "#ffd000";
    if (log10_nfa >= -20.0)
        return "#ff7f0e";
    if (log10_nfa >= -50.0)
        return "#e8112d";
    return "#c400ff";
}

void write_overlay_svg(const RasterImage& image, const LevelLineTree& tree,
                       const std::vector<Detection>& detections, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("write_overlay_svg: cannot write '" + path + "'");

    std::unordered_map<int32_t, size_t> index_by_id;
    for (size_t i = 0; i < tree.lines.size(); ++i)
        index_by_id.emplace(tree.lines[i].id, i);

    const int w = image.width(), h = image.height();
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "  <image width=\"" << w << "\" height=\"" << h
        << "\" preserveAspectRatio=\"none\" href=\"data:image/bmp;base64,"
        << base64(encode_bmp_gray(image)) << "\"/>\n";

    for (const Detection& det : detections) {
        const auto it = index_by_id.find(det.line_id);
        if (it == index_by_id.end())
            continue;
        const LevelLine& line = tree.lines[it->second];
        std::string d;
        d.reserve(line.polyline.size() * 16);
        for (size_t i = 0; i < line.polyline.size(); ++i) {
            d += i == 0 ? "M" : " L";
            // polyline vertices index pixel centers; the raster occupies
            // [0,w]x[0,h] with pixel (x,y) centered at (x+0.5, y+0.5)
            append_coord(d, line.polyline[i].x + 0.5);
            d += ",";
            append_coord(d, line.polyline[i].y + 0.5);
        }
        d += " Z";
        out << "  <path fill=\"none\" stroke=\"" << nfa_bucket_color(det.log10_nfa)
            << "\" stroke-width=\"0.6\" d=\"" << d << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace mb
