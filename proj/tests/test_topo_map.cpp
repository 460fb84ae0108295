#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "mb/stats.hpp"
#include "mb/topo_map.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mb;

namespace {

RasterImage random_int_image(int w, int h, uint32_t seed, int lo = 0, int hi = 255) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(lo, hi);
    std::vector<double> v(static_cast<size_t>(w) * h);
    for (double& x : v)
        x = dist(rng);
    return RasterImage(w, h, std::move(v), 1.0);
}

bool near(const Vec2& a, const Vec2& b, double tol = 1e-12) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

}  // namespace

TEST_CASE("extraction: constant image has no level lines") {
    CHECK(extract_level_lines(fixtures::constant(8, 8, 7.0)).empty());
}

TEST_CASE("extraction: single bright pixel gives 255 nested diamonds") {
    RasterImage img = fixtures::single_peak(4, 1, 1);
    const auto lines = extract_level_lines(img);
    REQUIRE(lines.size() == 255);

    for (size_t j = 0; j < lines.size(); ++j) {
        const LevelLine& line = lines[j];
        const double lv = j + 0.5;
        CHECK(line.level == lv);
        CHECK(line.num_crossings == 4);
        CHECK(line.n() == 2);
        CHECK(!line.touches_border);
        REQUIRE(line.polyline.size() == 4);

        // oracle: solve each incident Qedgel for the crossing position
        const double t = lv / 255.0;
        const std::vector<Vec2> expected{{t, 1.0}, {1.0, t}, {2.0 - t, 1.0}, {1.0, 2.0 - t}};
        for (const Vec2& e : expected) {
            bool found = false;
            for (const Vec2& p : line.polyline)
                found = found || near(p, e);
            CHECK(found);
        }
        CHECK(line.euclidean_length ==
              doctest::Approx(4.0 * std::hypot(1.0 - t, 1.0 - t)).epsilon(1e-12));
    }
}

TEST_CASE("extraction: half/half split closes along the border") {
    RasterImage img = fixtures::two_tone(6, 6);
    const auto lines = extract_level_lines(img);
    REQUIRE(lines.size() == 255);

    for (const LevelLine& line : lines) {
        CHECK(line.touches_border);
        CHECK(line.num_crossings == 6);  // one H-edge crossing per row
        const double want_x = 2.0 + line.level / 255.0;
        uint32_t crossings_checked = 0;
        bool corner_br = false, corner_tr = false;
        for (const Vec2& p : line.polyline) {
            if (near(p, {5.0, 0.0}))
                corner_br = true;
            else if (near(p, {5.0, 5.0}))
                corner_tr = true;
            else {
                CHECK(p.x == doctest::Approx(want_x).epsilon(1e-12));
                ++crossings_checked;
            }
        }
        CHECK(crossings_checked == 6);
        CHECK(corner_br);
        CHECK(corner_tr);
    }
}

TEST_CASE("extraction: saddles split by the bilinear center value") {
    RasterImage img(2, 2, {200.0, 0.0, 0.0, 200.0}, 1.0);
    const auto lines = extract_level_lines(img);
    // center value is 100: one weaving curve below it, two corner curves above
    size_t low = 0, high = 0;
    for (const LevelLine& line : lines)
        (line.level < 100.0 ? low : high) += 1;
    CHECK(low == 100);
    CHECK(high == 200);
    CHECK(lines.size() == 300);
    for (const LevelLine& line : lines) {
        CHECK(line.touches_border);
        CHECK(line.num_crossings == (line.level < 100.0 ? 4 : 2));
    }
}

TEST_CASE("inclusion tree: nested diamonds form a single chain") {
    RasterImage img = fixtures::single_peak(4, 1, 1);
    LevelLineTree tree = build_inclusion_tree(extract_level_lines(img));
    REQUIRE(tree.size() == 255);
    REQUIRE(tree.roots.size() == 1);
    CHECK(tree.roots[0] == 0);
    for (size_t i = 0; i < tree.size(); ++i) {
        CHECK(tree.parent[i] == static_cast<int32_t>(i) - 1);
        if (i + 1 < tree.size())
            CHECK(tree.children[i].size() == 1);
    }
    // oracle: child's vertices lie inside the parent polygon
    for (size_t i = 1; i < tree.size(); ++i)
        for (const Vec2& p : tree.lines[i].polyline)
            CHECK(point_in_polygon(tree.lines[i - 1].polyline, p));
    // forest invariant: edges == nodes - roots
    size_t edges = 0;
    for (int32_t p : tree.parent)
        edges += p >= 0 ? 1 : 0;
    CHECK(edges == tree.size() - tree.roots.size());
}

TEST_CASE("inclusion tree: two disjoint peaks hang off the frame") {
    RasterImage img = fixtures::single_peak(9, 2, 2);
    img.at(6, 6) = 255.0;
    RasterImage two(9, 9, std::vector<double>(img.values().begin(), img.values().end()), 1.0);
    LevelLineTree tree = build_inclusion_tree(extract_level_lines(two));
    CHECK(tree.size() == 510);
    CHECK(tree.roots.size() == 2);
}

TEST_CASE("monotone sections") {
    SUBCASE("single chain of 255 increasing levels is one section") {
        RasterImage img = fixtures::single_peak(4, 1, 1);
        LevelLineTree tree = build_inclusion_tree(extract_level_lines(img));
        const auto sections = find_monotone_sections(tree);
        REQUIRE(sections.size() == 1);
        CHECK(sections[0].line_ids.size() == 255);
        CHECK(sections[0].direction == MonotoneSection::Direction::Increasing);
    }
    SUBCASE("ring: levels rise then fall, split at the reversal") {
        RasterImage img = fixtures::ring();
        LevelLineTree tree = build_inclusion_tree(extract_level_lines(img));
        const auto sections = find_monotone_sections(tree);
        REQUIRE(sections.size() == 2);
        CHECK(sections[0].line_ids.size() + sections[1].line_ids.size() == tree.size());
        CHECK(sections[0].direction == MonotoneSection::Direction::Increasing);
        CHECK(sections[1].direction == MonotoneSection::Direction::Decreasing);
    }
    SUBCASE("branching node terminates its section") {
        // flat block with two inner peaks: one chain below the block value,
        // then a two-way branch
        std::vector<double> v(static_cast<size_t>(16) * 16, 0.0);
        for (int y = 6; y <= 9; ++y)
            for (int x = 3; x <= 12; ++x)
                v[static_cast<size_t>(y) * 16 + x] = 100.0;
        v[static_cast<size_t>(8) * 16 + 5] = 200.0;
        v[static_cast<size_t>(8) * 16 + 10] = 200.0;
        RasterImage img(16, 16, std::move(v), 1.0);

        LevelLineTree tree = build_inclusion_tree(extract_level_lines(img));
        REQUIRE(tree.size() == 300);  // 100 block lines + 2 x 100 peak lines
        const auto sections = find_monotone_sections(tree);
        REQUIRE(sections.size() == 3);
        std::multiset<size_t> sizes;
        for (const auto& s : sections)
            sizes.insert(s.line_ids.size());
        CHECK(sizes == std::multiset<size_t>{100, 100, 100});

        // the branching node is the last line of its section
        std::map<int32_t, size_t> children_of;
        for (size_t i = 0; i < tree.size(); ++i)
            children_of[tree.lines[i].id] = tree.children[i].size();
        for (const auto& s : sections)
            for (size_t i = 0; i + 1 < s.line_ids.size(); ++i)
                CHECK(children_of[s.line_ids[i]] == 1);
    }
    SUBCASE("sections partition the tree") {
        RasterImage img = fixtures::scene(48, 48);
        LevelLineTree tree = build_inclusion_tree(extract_level_lines(img));
        const auto sections = find_monotone_sections(tree);
        std::set<int32_t> seen;
        size_t total = 0;
        for (const auto& s : sections) {
            total += s.line_ids.size();
            for (int32_t id : s.line_ids)
                seen.insert(id);
        }
        CHECK(total == tree.size());
        CHECK(seen.size() == tree.size());
    }
}

TEST_CASE("reconstruction from quantized upper level sets") {
    SUBCASE("constant image") {
        RasterImage img = fixtures::constant(5, 5, 33.0);
        RasterImage r = reconstruct_from_level_sets(img);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x)
                CHECK(r.at(x, y) == img.at(x, y));
    }
    SUBCASE("two-valued image") {
        RasterImage img = fixtures::two_tone(6, 4);
        RasterImage r = reconstruct_from_level_sets(img);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 6; ++x)
                CHECK(r.at(x, y) == img.at(x, y));
    }
    SUBCASE("arbitrary 8x8 integer fixture is pixel-exact at step 1") {
        RasterImage img = random_int_image(8, 8, 424242);
        RasterImage r = reconstruct_from_level_sets(img);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
                CHECK(r.at(x, y) == img.at(x, y));
    }
    SUBCASE("non-integer values quantize down to the value lattice") {
        RasterImage img(2, 2, {3.7, 0.2, 255.0, 128.999}, 1.0);
        RasterImage r = reconstruct_from_level_sets(img);
        CHECK(r.at(0, 0) == 3.0);
        CHECK(r.at(1, 0) == 0.0);
        CHECK(r.at(0, 1) == 255.0);
        CHECK(r.at(1, 1) == 128.0);
    }
}

TEST_CASE("level lines are simple and mutually disjoint") {
    for (uint32_t seed : {1u, 7u}) {
        RasterImage img = random_int_image(9, 9, seed, 0, 40);
        const auto lines = extract_level_lines(img);
        REQUIRE(!lines.empty());
        for (const LevelLine& line : lines)
            CHECK(!oracles::self_intersects(line.polyline));

        // pairwise, with a bbox prefilter to keep the n^2 scan cheap
        struct Box {
            double x0, y0, x1, y1;
        };
        std::vector<Box> boxes;
        for (const LevelLine& line : lines) {
            Box b{1e9, 1e9, -1e9, -1e9};
            for (const Vec2& p : line.polyline) {
                b.x0 = std::min(b.x0, p.x);
                b.y0 = std::min(b.y0, p.y);
                b.x1 = std::max(b.x1, p.x);
                b.y1 = std::max(b.y1, p.y);
            }
            boxes.push_back(b);
        }
        for (size_t i = 0; i < lines.size(); ++i)
            for (size_t j = i + 1; j < lines.size(); ++j) {
                if (boxes[i].x1 < boxes[j].x0 || boxes[j].x1 < boxes[i].x0 ||
                    boxes[i].y1 < boxes[j].y0 || boxes[j].y1 < boxes[i].y0)
                    continue;
                CHECK(!oracles::polylines_cross(lines[i].polyline, lines[j].polyline));
            }
    }
}

TEST_CASE("affine contrast change maps level lines bijectively") {
    RasterImage img = random_int_image(10, 10, 99, 0, 60);
    RasterImage mapped = fixtures::affine_map(img, 2.0, 10.0);
    const auto a = extract_level_lines(img);
    const auto b = extract_level_lines(mapped);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].level == doctest::Approx(2.0 * a[i].level + 10.0).epsilon(1e-12));
        REQUIRE(b[i].polyline.size() == a[i].polyline.size());
        for (size_t k = 0; k < a[i].polyline.size(); ++k)
            CHECK(near(a[i].polyline[k], b[i].polyline[k], 1e-9));
        CHECK(a[i].sample_idx == b[i].sample_idx);
        CHECK(b[i].euclidean_length == doctest::Approx(a[i].euclidean_length).epsilon(1e-12));
    }
}

TEST_CASE("noise images carry a large topographic map") {
    RasterImage img = gaussian_noise_image(64, 50.0, 3);
    size_t count = 0;
    for_each_level_line(img, [&](LevelLine&&) { ++count; });
    CHECK(count > 1000);   // order-of-magnitude sanity anchor
    CHECK(count < 5000000);
}

TEST_CASE("regularity values match the brute-force walker") {
    SUBCASE("zig-zag closed polyline") {
        std::vector<Vec2> pts;
        for (int i = 0; i < 24; ++i)
            pts.push_back({static_cast<double>(i), (i % 2 == 0) ? 0.0 : 1.3});
        for (int i = 24; i > 0; --i)
            pts.push_back({static_cast<double>(i) - 0.5, 6.0 + ((i % 3) - 1) * 0.7});
        LevelLine line = fixtures::synthetic_line(std::move(pts));
        const auto got = regularity_values(line, 5.0);
        const auto expect = oracles::regularity_brute_force(line, 5.0);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    SUBCASE("values lie in (0, 1]") {
        LevelLine line = fixtures::synthetic_line(fixtures::regular_polygon(0, 0, 10, 360));
        for (double r : regularity_values(line, 5.0)) {
            CHECK(r > 0.0);
            CHECK(r <= 1.0);
        }
    }
    SUBCASE("short curves yield no values") {
        LevelLine line = fixtures::synthetic_line(fixtures::regular_polygon(0, 0, 1.0, 8));
        CHECK(regularity_values(line, 5.0).empty());
    }
}
