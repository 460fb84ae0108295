#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "mb/maximality.hpp"
#include "support/fixtures.hpp"

using namespace mb;

namespace {

struct Pipeline {
    LevelLineTree tree;
    std::vector<MonotoneSection> sections;
    GradientField field;
    TailHistogram hc;
};

Pipeline run_contrast_pipeline(const RasterImage& img) {
    LevelLineTree tree = build_inclusion_tree(extract_level_lines(img));
    auto sections = find_monotone_sections(tree);
    GradientField field = compute_gradient_field(img);
    TailHistogram hc = build_contrast_histogram(field);
    return {std::move(tree), std::move(sections), std::move(field), std::move(hc)};
}

}  // namespace

TEST_CASE("pruning the nested-disk bundle keeps exactly the minimum") {
    Pipeline p = run_contrast_pipeline(fixtures::disk_cone());
    REQUIRE(p.sections.size() == 1);
    REQUIRE(p.sections[0].line_ids.size() >= 50);

    DetectorParams params;
    const auto dets = detect_boundaries(p.tree, p.field, Detector::DmmMcb, params, &p.hc, nullptr);
    const auto pruned = prune_maximal(p.tree, p.sections, dets);
    REQUIRE(pruned.size() == 1);
    CHECK(pruned[0].maximal);

    // survivor is the meaningful argmin over the section
    double best = 1e300;
    int32_t best_id = -1;
    for (const Detection& d : dets)
        if (d.meaningful && (d.log10_nfa < best || (d.log10_nfa == best && d.line_id < best_id))) {
            best = d.log10_nfa;
            best_id = d.line_id;
        }
    CHECK(pruned[0].line_id == best_id);
    CHECK(pruned[0].log10_nfa == best);

    SUBCASE("idempotent") {
        const auto again = prune_maximal(p.tree, p.sections, pruned);
        REQUIRE(again.size() == pruned.size());
        CHECK(again[0].line_id == pruned[0].line_id);
        CHECK(again[0].log10_nfa == pruned[0].log10_nfa);
    }
}

TEST_CASE("sections with no meaningful line contribute nothing") {
    Pipeline p = run_contrast_pipeline(fixtures::disk_cone());
    DetectorParams params;
    params.eps = 1e-300;  // stricter than any score in this fixture
    const auto dets = detect_boundaries(p.tree, p.field, Detector::DmmMcb, params, &p.hc, nullptr);
    for (const Detection& d : dets)
        CHECK(!d.meaningful);
    CHECK(prune_maximal(p.tree, p.sections, dets).empty());
}

TEST_CASE("disjoint single-line sections both survive") {
    std::vector<double> v(static_cast<size_t>(16) * 16, 0.0);
    for (int dy = 0; dy < 3; ++dy)
        for (int dx = 0; dx < 3; ++dx) {
            v[static_cast<size_t>(2 + dy) * 16 + 2 + dx] = 1.0;
            v[static_cast<size_t>(10 + dy) * 16 + 10 + dx] = 1.0;
        }
    RasterImage img(16, 16, std::move(v), 1.0);

    Pipeline p = run_contrast_pipeline(img);
    REQUIRE(p.tree.size() == 2);
    REQUIRE(p.sections.size() == 2);

    DetectorParams params;
    params.eps = 1e9;  // tiny curves, N_ll = 2: make both meaningful
    const auto dets = detect_boundaries(p.tree, p.field, Detector::DmmMcb, params, &p.hc, nullptr);
    const auto pruned = prune_maximal(p.tree, p.sections, dets);
    CHECK(pruned.size() == 2);
}

TEST_CASE("pruning invariants over randomized detections") {
    Pipeline p = run_contrast_pipeline(fixtures::ring());
    std::map<int32_t, size_t> section_of;
    for (size_t s = 0; s < p.sections.size(); ++s)
        for (int32_t id : p.sections[s].line_ids)
            section_of[id] = s;

    std::mt19937 rng(5150);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Detection> dets;
        for (const LevelLine& line : p.tree.lines) {
            Detection d;
            d.line_id = line.id;
            d.detector = Detector::TmaMcb;
            d.log10_nfa = std::uniform_real_distribution<double>(-30.0, 10.0)(rng);
            d.meaningful = d.log10_nfa < 0.0;
            dets.push_back(d);
        }
        const auto pruned = prune_maximal(p.tree, p.sections, dets);

        std::set<size_t> used_sections;
        std::map<int32_t, double> nfa_by_id;
        for (const Detection& d : dets)
            nfa_by_id[d.line_id] = d.log10_nfa;
        for (const Detection& d : pruned) {
            CHECK(d.meaningful);  // survivors are meaningful
            CHECK(d.maximal);
            const size_t sec = section_of.at(d.line_id);
            CHECK(!used_sections.count(sec));  // at most one per section
            used_sections.insert(sec);
            for (int32_t id : p.sections[sec].line_ids)  // section minimum
                if (nfa_by_id.at(id) < d.log10_nfa)
                    CHECK(nfa_by_id.at(id) >= 0.0);  // only non-meaningful can be lower
        }
        CHECK(pruned.size() <= p.sections.size());

        const auto again = prune_maximal(p.tree, p.sections, pruned);
        CHECK(again.size() == pruned.size());
    }
}
