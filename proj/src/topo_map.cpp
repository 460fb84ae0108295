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

#include "mb/topo_map.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace mb {

namespace {

// -------------------------------------------------------------------------
// Level line tracing.
//
// The iso-contour of the bilinear interpolation at level lambda crosses a
// Qedgel (edge between adjacent pixel centers) wherever the endpoint values
// straddle lambda; inside a dual cell the contour is approximated by the
// segment joining its two edge crossings. Curves are traversed with the
// upper region { u > lambda } on the left; saddle cells (four crossings) are
// split according to the bilinear value at the cell center. Traces that
// leave the domain are closed along the border path, walking it with the
// domain on the left.
// -------------------------------------------------------------------------

enum class Side : uint8_t { Bottom, Right, Top, Left };

struct Edge {
    bool horizontal = true;
    int x = 0;
    int y = 0;

    bool operator==(const Edge&) const = default;
};

struct Tracer {
    const RasterImage& img;
    const int w, h;
    double lambda = 0.0;
    std::vector<uint8_t> above;     // w*h
    std::vector<uint8_t> visitedH;  // (w-1)*h
    std::vector<uint8_t> visitedV;  // w*(h-1)

    explicit Tracer(const RasterImage& image)
        : img(image),
          w(image.width()),
          h(image.height()),
          above(static_cast<size_t>(w) * h),
          visitedH(static_cast<size_t>(w - 1) * h),
          visitedV(static_cast<size_t>(w) * (h - 1)) {}

    bool is_above(int x, int y) const { return above[static_cast<size_t>(y) * w + x] != 0; }

    void set_level(double lv) {
        lambda = lv;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                above[static_cast<size_t>(y) * w + x] = img.at(x, y) > lv ? 1 : 0;
        std::fill(visitedH.begin(), visitedH.end(), 0);
        std::fill(visitedV.begin(), visitedV.end(), 0);
    }

    bool crossed(const Edge& e) const {
        return e.horizontal ? is_above(e.x, e.y) != is_above(e.x + 1, e.y)
                            : is_above(e.x, e.y) != is_above(e.x, e.y + 1);
    }

    bool visited(const Edge& e) const {
        return e.horizontal ? visitedH[static_cast<size_t>(e.y) * (w - 1) + e.x] != 0
                            : visitedV[static_cast<size_t>(e.y) * w + e.x] != 0;
    }

    void mark(const Edge& e) {
        if (e.horizontal)
            visitedH[static_cast<size_t>(e.y) * (w - 1) + e.x] = 1;
        else
            visitedV[static_cast<size_t>(e.y) * w + e.x] = 1;
    }

    Vec2 crossing_point(const Edge& e) const {
        const double a = img.at(e.x, e.y);
        const double b = e.horizontal ? img.at(e.x + 1, e.y) : img.at(e.x, e.y + 1);
        const double t = (lambda - a) / (b - a);
        return e.horizontal ? Vec2{e.x + t, static_cast<double>(e.y)}
                            : Vec2{static_cast<double>(e.x), e.y + t};
    }

    // Traversal direction through an edge with the upper region on the left.
    // Horizontal edge: +y when the left endpoint is above; vertical edge:
    // +x when the upper endpoint is above. Returned as (dx, dy) in {-1,0,1}.
    std::pair<int, int> canonical_dir(const Edge& e) const {
        if (e.horizontal)
            return is_above(e.x, e.y) ? std::pair{0, 1} : std::pair{0, -1};
        return is_above(e.x, e.y + 1) ? std::pair{1, 0} : std::pair{-1, 0};
    }

    // Side of the cell the trace exits through, given the entry side.
    Side exit_side(int cx, int cy, Side entry) const {
        const bool a00 = is_above(cx, cy), a10 = is_above(cx + 1, cy);
        const bool a01 = is_above(cx, cy + 1), a11 = is_above(cx + 1, cy + 1);
        const bool cb = a00 != a10, ct = a01 != a11, cl = a00 != a01, cr = a10 != a11;
        if (cb && ct && cl && cr) {
            // saddle: the diagonal of above corners connects through the
            // center iff the bilinear center value is above lambda
            const double center =
                (img.at(cx, cy) + img.at(cx + 1, cy) + img.at(cx, cy + 1) + img.at(cx + 1, cy + 1)) /
                4.0;
            const bool pair_br_tl = (a00 == (center > lambda));
            switch (entry) {
                case Side::Bottom: return pair_br_tl ? Side::Right : Side::Left;
                case Side::Right: return pair_br_tl ? Side::Bottom : Side::Top;
                case Side::Top: return pair_br_tl ? Side::Left : Side::Right;
                case Side::Left: return pair_br_tl ? Side::Top : Side::Bottom;
            }
        }
        int count = 0;
        Side other = entry;
        auto consider = [&](bool c, Side s) {
            if (c) {
                ++count;
                if (s != entry)
                    other = s;
            }
        };
        consider(cb, Side::Bottom);
        consider(cr, Side::Right);
        consider(ct, Side::Top);
        consider(cl, Side::Left);
        if (count != 2 || other == entry)
            throw StructuralError("level line trace: inconsistent cell crossing pattern");
        return other;
    }

    static Edge edge_of(int cx, int cy, Side side) {
        switch (side) {
            case Side::Bottom: return Edge{true, cx, cy};
            case Side::Top: return Edge{true, cx, cy + 1};
            case Side::Left: return Edge{false, cx, cy};
            case Side::Right: return Edge{false, cx + 1, cy};
        }
        return {};
    }

    LevelLine trace(const Edge& start) {
        LevelLine line;
        line.level = lambda;

        uint32_t crossings = 0;
        auto append_crossing = [&](const Edge& e) {
            if (crossings % 2 == 0)
                line.sample_idx.push_back(static_cast<uint32_t>(line.polyline.size()));
            ++crossings;
            line.polyline.push_back(crossing_point(e));
            mark(e);
        };
        auto add_arc = [&](const Vec2& a, const Vec2& b) {
            line.arc_length += std::hypot(b.x - a.x, b.y - a.y);
        };

        Edge e = start;
        auto [dx, dy] = canonical_dir(e);
        append_crossing(e);

        for (;;) {
            // cell the trace enters through edge e in direction (dx, dy)
            int cx, cy;
            Side entry;
            bool inside;
            if (e.horizontal) {
                cx = e.x;
                cy = dy > 0 ? e.y : e.y - 1;
                entry = dy > 0 ? Side::Bottom : Side::Top;
                inside = cy >= 0 && cy <= h - 2;
            } else {
                cx = dx > 0 ? e.x : e.x - 1;
                cy = e.y;
                entry = dx > 0 ? Side::Left : Side::Right;
                inside = cx >= 0 && cx <= w - 2;
            }

            if (!inside) {
                line.touches_border = true;
                if (!walk_border(line, e, dx, dy, start, append_crossing))
                    break;  // closed at the start edge
                std::tie(dx, dy) = canonical_dir(e);
                continue;
            }

            const Side out = exit_side(cx, cy, entry);
            const Edge f = edge_of(cx, cy, out);
            if (f == start) {
                add_arc(line.polyline.back(), line.polyline.front());
                break;
            }
            if (visited(f))
                throw StructuralError("level line trace: revisited edge");
            add_arc(line.polyline.back(), crossing_point(f));
            append_crossing(f);
            e = f;
            switch (out) {
                case Side::Bottom: dx = 0, dy = -1; break;
                case Side::Top: dx = 0, dy = 1; break;
                case Side::Left: dx = -1, dy = 0; break;
                case Side::Right: dx = 1, dy = 0; break;
            }
        }

        line.num_crossings = crossings;
        if (crossings % 2 == 1 && !line.sample_idx.empty())
            line.sample_idx.pop_back();  // n = floor(m/2)
        double len = 0.0;
        for (size_t i = 0; i < line.polyline.size(); ++i) {
            const Vec2& a = line.polyline[i];
            const Vec2& b = line.polyline[(i + 1) % line.polyline.size()];
            len += std::hypot(b.x - a.x, b.y - a.y);
        }
        line.euclidean_length = len;
        return line;
    }

    // Walks the domain border (domain on the left: bottom +x, right +y,
    // top -x, left -y) from the crossing of `exit_edge` until the next
    // border crossing. Appends passed corners, then either resumes the
    // interior trace through that crossing (returns true, `exit_edge`
    // updated) or closes the curve at the start edge (returns false).
    template <typename Append>
    bool walk_border(LevelLine& line, Edge& exit_edge, int dx, int dy, const Edge& start,
                     Append&& append_crossing) {
        Side side;
        double pos;
        const Vec2 p = crossing_point(exit_edge);
        if (exit_edge.horizontal) {
            side = dy < 0 ? Side::Bottom : Side::Top;
            pos = p.x;
        } else {
            side = dx < 0 ? Side::Left : Side::Right;
            pos = p.y;
        }

        for (int legs = 0; legs <= 4; ++legs) {
            Edge found{};
            bool have = false;
            switch (side) {
                case Side::Bottom:
                    for (int ex = std::max(0, static_cast<int>(std::floor(pos))); ex <= w - 2; ++ex) {
                        Edge g{true, ex, 0};
                        if (!crossed(g))
                            continue;
                        if (crossing_point(g).x > pos) {
                            found = g, have = true;
                            break;
                        }
                    }
                    break;
                case Side::Right:
                    for (int ey = std::max(0, static_cast<int>(std::floor(pos))); ey <= h - 2; ++ey) {
                        Edge g{false, w - 1, ey};
                        if (!crossed(g))
                            continue;
                        if (crossing_point(g).y > pos) {
                            found = g, have = true;
                            break;
                        }
                    }
                    break;
                case Side::Top:
                    for (int ex = std::min(w - 2, static_cast<int>(std::ceil(pos)) - 1); ex >= 0; --ex) {
                        Edge g{true, ex, h - 1};
                        if (!crossed(g))
                            continue;
                        if (crossing_point(g).x < pos) {
                            found = g, have = true;
                            break;
                        }
                    }
                    break;
                case Side::Left:
                    for (int ey = std::min(h - 2, static_cast<int>(std::ceil(pos)) - 1); ey >= 0; --ey) {
                        Edge g{false, 0, ey};
                        if (!crossed(g))
                            continue;
                        if (crossing_point(g).y < pos) {
                            found = g, have = true;
                            break;
                        }
                    }
                    break;
            }
            if (have) {
                if (found == start)
                    return false;
                if (visited(found))
                    throw StructuralError("level line trace: border walk hit a visited crossing");
                append_crossing(found);
                exit_edge = found;
                return true;
            }

            // no crossing left on this side: append its end corner and turn
            switch (side) {
                case Side::Bottom:
                    line.polyline.push_back(Vec2{static_cast<double>(w - 1), 0.0});
                    side = Side::Right;
                    pos = 0.0;
                    break;
                case Side::Right:
                    line.polyline.push_back(Vec2{static_cast<double>(w - 1), static_cast<double>(h - 1)});
                    side = Side::Top;
                    pos = static_cast<double>(w - 1);
                    break;
                case Side::Top:
                    line.polyline.push_back(Vec2{0.0, static_cast<double>(h - 1)});
                    side = Side::Left;
                    pos = static_cast<double>(h - 1);
                    break;
                case Side::Left:
                    line.polyline.push_back(Vec2{0.0, 0.0});
                    side = Side::Bottom;
                    pos = 0.0;
                    break;
            }
        }
        throw StructuralError("level line trace: border walk did not terminate");
    }
};

}  // namespace

void for_each_level_line(const RasterImage& image, const std::function<void(LevelLine&&)>& sink) {
    const std::vector<double> levels = image.quantized_levels();
    if (levels.empty())
        return;

    Tracer tracer(image);
    int32_t next_id = 0;
    const int w = tracer.w, h = tracer.h;
    for (double lv : levels) {
        tracer.set_level(lv);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w - 1; ++x) {
                Edge e{true, x, y};
                if (tracer.crossed(e) && !tracer.visited(e)) {
                    LevelLine line = tracer.trace(e);
                    line.id = next_id++;
                    sink(std::move(line));
                }
            }
        for (int y = 0; y < h - 1; ++y)
            for (int x = 0; x < w; ++x) {
                Edge e{false, x, y};
                if (tracer.crossed(e) && !tracer.visited(e)) {
                    LevelLine line = tracer.trace(e);
                    line.id = next_id++;
                    sink(std::move(line));
                }
            }
    }
}

std::vector<LevelLine> extract_level_lines(const RasterImage& image) {
    std::vector<LevelLine> lines;
    for_each_level_line(image, [&](LevelLine&& line) { lines.push_back(std::move(line)); });
    return lines;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double acc = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    return acc / 2.0;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    bool in = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
            const double xi =
                poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) * (poly[i].x - poly[j].x);
            if (p.x < xi)
                in = !in;
        }
    }
    return in;
}

namespace {

// Interior probe points for the inclusion test. A crossing vertex sits on a
// Qedgel whose two pixel endpoints straddle the curve; the midpoint between
// the crossing and the inside endpoint lies strictly inside the region and
// stays on the (closed) cell edge. Points on cell edges cannot fall between
// another line's chord and its true iso-curve (those lens-shaped gaps live
// strictly inside cells), so the classification is exact for every other
// polyline of the family. Crossings on or next to the image border are
// skipped to keep clear of border-closure paths; tiny border slivers fall
// back to their vertex centroid.
std::vector<Vec2> interior_probe_points(const LevelLine& line, size_t max_points) {
    std::vector<Vec2> probes;
    for (uint32_t vi : line.sample_idx) {
        if (probes.size() >= max_points)
            break;
        const Vec2 p = line.polyline[vi];
        const bool on_h_edge = p.y == std::floor(p.y) && p.x != std::floor(p.x);
        const bool on_v_edge = p.x == std::floor(p.x) && p.y != std::floor(p.y);
        Vec2 a, b;  // edge endpoint pixel centers
        if (on_h_edge) {
            a = {std::floor(p.x), p.y};
            b = {std::floor(p.x) + 1.0, p.y};
        } else if (on_v_edge) {
            a = {p.x, std::floor(p.y)};
            b = {p.x, std::floor(p.y) + 1.0};
        } else {
            continue;
        }
        const bool a_in = point_in_polygon(line.polyline, a);
        const bool b_in = point_in_polygon(line.polyline, b);
        if (a_in == b_in)
            continue;  // degenerate (border path through a pixel center)
        const Vec2 inside = a_in ? a : b;
        probes.push_back({(p.x + inside.x) / 2.0, (p.y + inside.y) / 2.0});
    }
    if (probes.empty()) {
        Vec2 c{0.0, 0.0};
        for (const Vec2& v : line.polyline) {
            c.x += v.x;
            c.y += v.y;
        }
        c.x /= static_cast<double>(line.polyline.size());
        c.y /= static_cast<double>(line.polyline.size());
        probes.push_back(c);
    }
    return probes;
}

}  // namespace

LevelLineTree build_inclusion_tree(std::vector<LevelLine> lines) {
    LevelLineTree tree;
    tree.lines = std::move(lines);
    const size_t n = tree.lines.size();
    tree.parent.assign(n, -1);
    tree.children.assign(n, {});
    if (n == 0)
        return tree;

    struct Info {
        double area;
        Vec2 lo, hi;  // bbox
        std::vector<Vec2> probes;
    };
    std::vector<Info> info(n);
    Vec2 glo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 ghi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < n; ++i) {
        const auto& poly = tree.lines[i].polyline;
        Info& f = info[i];
        f.area = std::abs(polygon_area(poly));
        f.lo = f.hi = poly[0];
        for (const Vec2& v : poly) {
            f.lo.x = std::min(f.lo.x, v.x);
            f.lo.y = std::min(f.lo.y, v.y);
            f.hi.x = std::max(f.hi.x, v.x);
            f.hi.y = std::max(f.hi.y, v.y);
        }
        f.probes = interior_probe_points(tree.lines[i], 2);
        glo.x = std::min(glo.x, f.lo.x);
        glo.y = std::min(glo.y, f.lo.y);
        ghi.x = std::max(ghi.x, f.hi.x);
        ghi.y = std::max(ghi.y, f.hi.y);
    }

    std::vector<int32_t> order(n);
    for (size_t i = 0; i < n; ++i)
        order[i] = static_cast<int32_t>(i);
    std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
        if (info[a].area != info[b].area)
            return info[a].area > info[b].area;  // descending
        return a < b;
    });

    // uniform grid over the global bbox; cells hold inserted lines by bbox
    const int grid = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(n)) / 2.0), 1, 32);
    const double sx = (ghi.x > glo.x) ? grid / (ghi.x - glo.x) : 0.0;
    const double sy = (ghi.y > glo.y) ? grid / (ghi.y - glo.y) : 0.0;
    auto cell_of = [&](double v, double lo, double scale) {
        return std::clamp(static_cast<int>((v - lo) * scale), 0, grid - 1);
    };
    std::vector<std::vector<int32_t>> cells(static_cast<size_t>(grid) * grid);

    for (int32_t idx : order) {
        const Info& f = info[idx];
        const Vec2 rep = f.probes.front();
        // candidates, ascending area: most recent insertions first
        const auto& bucket =
            cells[static_cast<size_t>(cell_of(rep.y, glo.y, sy)) * grid + cell_of(rep.x, glo.x, sx)];
        int32_t parent = -1;
        for (auto it = bucket.rbegin(); it != bucket.rend(); ++it) {
            const Info& c = info[*it];
            if (rep.x < c.lo.x || rep.x > c.hi.x || rep.y < c.lo.y || rep.y > c.hi.y)
                continue;
            if (point_in_polygon(tree.lines[*it].polyline, rep)) {
                parent = *it;
                break;
            }
        }
        if (parent >= 0 && f.probes.size() > 1 &&
            !point_in_polygon(tree.lines[parent].polyline, f.probes[1]))
            throw StructuralError(
                "build_inclusion_tree: probe points disagree (crossing polylines?)");
        tree.parent[idx] = parent;
        if (parent >= 0)
            tree.children[parent].push_back(idx);
        else
            tree.roots.push_back(idx);

        const int cx0 = cell_of(f.lo.x, glo.x, sx), cx1 = cell_of(f.hi.x, glo.x, sx);
        const int cy0 = cell_of(f.lo.y, glo.y, sy), cy1 = cell_of(f.hi.y, glo.y, sy);
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx)
                cells[static_cast<size_t>(cy) * grid + cx].push_back(idx);
    }

    for (auto& ch : tree.children)
        std::sort(ch.begin(), ch.end());
    std::sort(tree.roots.begin(), tree.roots.end());
    return tree;
}

std::vector<MonotoneSection> find_monotone_sections(const LevelLineTree& tree) {
    std::vector<MonotoneSection> sections;
    const size_t n = tree.size();
    if (n == 0)
        return sections;

    std::vector<int32_t> chain_starts;
    for (size_t i = 0; i < n; ++i) {
        const int32_t p = tree.parent[i];
        if (p < 0 || tree.children[p].size() >= 2)
            chain_starts.push_back(static_cast<int32_t>(i));
    }

    auto emit = [&](std::vector<int32_t>&& idxs, int dir) {
        MonotoneSection sec;
        sec.line_ids.reserve(idxs.size());
        for (int32_t idx : idxs)
            sec.line_ids.push_back(tree.lines[idx].id);
        sec.direction = sec.line_ids.size() < 2 ? MonotoneSection::Direction::Single
                        : dir > 0               ? MonotoneSection::Direction::Increasing
                                                : MonotoneSection::Direction::Decreasing;
        sections.push_back(std::move(sec));
    };

    for (int32_t start : chain_starts) {
        // collect the single-child chain, terminal node included
        std::vector<int32_t> chain{start};
        int32_t cur = start;
        while (tree.children[cur].size() == 1) {
            cur = tree.children[cur][0];
            chain.push_back(cur);
        }

        std::vector<int32_t> run{chain[0]};
        int dir = 0;
        for (size_t i = 1; i < chain.size(); ++i) {
            const double prev = tree.lines[chain[i - 1]].level;
            const double next = tree.lines[chain[i]].level;
            const int s = next > prev ? 1 : next < prev ? -1 : 0;
            if (s != 0 && (dir == 0 || s == dir)) {
                dir = s;
                run.push_back(chain[i]);
            } else {
                emit(std::move(run), dir);
                run = {chain[i]};
                dir = 0;
            }
        }
        emit(std::move(run), dir);
    }
    return sections;
}

RasterImage reconstruct_from_level_sets(const RasterImage& image) {
    const double q = image.quantization_step();
    const long long j0 = static_cast<long long>(std::floor(image.min_value() / q));
    const long long j1 = static_cast<long long>(std::floor(image.max_value() / q));
    const int w = image.width(), h = image.height();

    std::vector<double> rebuilt(static_cast<size_t>(w) * h, j0 * q);
    for (long long j = j0; j <= j1; ++j) {
        const double level = j * q;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (image.at(x, y) >= level)
                    rebuilt[static_cast<size_t>(y) * w + x] = level;
    }
    return RasterImage(w, h, std::move(rebuilt), q);
}

std::vector<double> regularity_values(const LevelLine& line, double s) {
    std::vector<double> out;
    const double l = line.euclidean_length;
    if (!(s > 0.0) || !(l > 2.0 * s))
        return out;

    const auto& pts = line.polyline;
    const size_t m = pts.size();
    std::vector<double> cum(m + 1, 0.0);
    for (size_t i = 0; i < m; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % m];
        cum[i + 1] = cum[i] + std::hypot(b.x - a.x, b.y - a.y);
    }
    const double total = cum[m];

    auto point_at = [&](double arc) {
        if (arc < 0.0)
            arc += total;
        if (arc >= total)
            arc -= total;
        const auto it = std::upper_bound(cum.begin(), cum.end(), arc);
        size_t seg = static_cast<size_t>(it - cum.begin()) - 1;
        if (seg >= m)
            seg = m - 1;
        const double seglen = cum[seg + 1] - cum[seg];
        const double t = seglen > 1e-300 ? (arc - cum[seg]) / seglen : 0.0;
        const Vec2& a = pts[seg];
        const Vec2& b = pts[(seg + 1) % m];
        return Vec2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    };

    out.reserve(line.sample_idx.size());
    for (uint32_t vi : line.sample_idx) {
        const Vec2 x = pts[vi];
        const double arc = cum[vi];
        const Vec2 fwd = point_at(arc + s);
        const Vec2 bwd = point_at(arc - s);
        const double chord =
            std::max(std::hypot(fwd.x - x.x, fwd.y - x.y), std::hypot(bwd.x - x.x, bwd.y - x.y));
        out.push_back(std::min(chord / s, 1.0));
    }
    return out;
}

}  // namespace mb
