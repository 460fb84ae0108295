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
#include <functional>
#include <vector>

#include "mb/raster.hpp"

namespace mb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// One closed iso-contour of the bilinear interpolation at a quantized level.
///
/// The polyline holds the Qedgel crossing points in traversal order; curves
/// that reach the image border are closed along the border path, whose corner
/// vertices are interleaved with the crossings. Closure is implied: the first
/// point is not repeated at the end.
struct LevelLine {
    int32_t id = -1;
    double level = 0.0;
    std::vector<Vec2> polyline;
    std::vector<uint32_t> sample_idx;  // polyline indices of every second crossing
    uint32_t num_crossings = 0;        // m; samples are n = floor(m/2)
    double euclidean_length = 0.0;     // l, includes the closing segment
    double arc_length = 0.0;           // iso-arc portion only: excludes border paths
    bool touches_border = false;

    uint32_t n() const { return static_cast<uint32_t>(sample_idx.size()); }

    /// Length backing the NFA exponents: the part of the curve that actually
    /// carries gradient samples. Border-closure paths add geometric length
    /// but no observations, so counting them would overstate the number of
    /// independent values and break the noise guarantee.
    double statistical_length() const { return arc_length; }
};

/// Traces every closed level line of `image` at its quantized levels, feeding
/// each finished line to `sink`. Levels are visited in ascending order and
/// lines within a level in scan order, so ids are deterministic. Streaming
/// keeps memory bounded on noise images with millions of lines.
void for_each_level_line(const RasterImage& image, const std::function<void(LevelLine&&)>& sink);

/// Collects all level lines. Constant images yield an empty list.
std::vector<LevelLine> extract_level_lines(const RasterImage& image);

/// Inclusion tree over the extracted lines. parent[i] is the index of the
/// smallest-interior line strictly containing line i, or -1 for lines hanging
/// off the virtual frame root.
struct LevelLineTree {
    std::vector<LevelLine> lines;
    std::vector<int32_t> parent;
    std::vector<std::vector<int32_t>> children;
    std::vector<int32_t> roots;  // children of the virtual frame

    size_t size() const { return lines.size(); }
};

/// Builds the inclusion forest by point-in-polygon tests against candidate
/// containers in ascending interior-area order (bounding boxes prefilter the
/// candidates through a uniform grid).
/// Throws StructuralError if two representative points of the same line
/// disagree about a containment decision, which would mean crossing
/// polylines, i.e. an extraction bug.
LevelLineTree build_inclusion_tree(std::vector<LevelLine> lines);

/// Maximal run of tree nodes along one branch in which every interior node
/// has a single child and the level moves strictly in one direction.
struct MonotoneSection {
    enum class Direction { Increasing, Decreasing, Single };
    std::vector<int32_t> line_ids;
    Direction direction = Direction::Single;
};

/// Partitions all tree nodes into maximal monotone sections. Branching nodes
/// terminate their section; a contrast reversal (level not strictly
/// continuing) starts a new one.
std::vector<MonotoneSection> find_monotone_sections(const LevelLineTree& tree);

/// Rebuilds the image from its quantized upper level sets at the value
/// lattice j*step: r(x) = sup{ lambda : x in X_lambda }. The result equals
/// the input quantized down to the lattice, and is pixel-exact for integer
/// images at step 1.
RasterImage reconstruct_from_level_sets(const RasterImage& image);

/// Arc-length regularity at every sampled point of a closed line: walk +-s
/// along the polyline (with wraparound) and take the larger chord over s.
/// Values lie in (0, 1]; exactly 1 only when one side of the window is
/// straight. Requires euclidean_length > 2s; returns sample-ordered values.
std::vector<double> regularity_values(const LevelLine& line, double s);

/// Closed-polyline helpers shared by the tree builder and tests.
double polygon_area(const std::vector<Vec2>& poly);
bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p);

}  // namespace mb
