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

// Command line front end: boundary detection on PGM images, regularity
// statistics preparation, and Monte-Carlo validation of the noise bounds.
//
// Exit codes: 0 success, 1 usage, 2 pipeline/data error, 3 bound violation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mb/harness.hpp"
#include "mb/json_io.hpp"
#include "mb/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPipeline = 2;
constexpr int kExitBound = 3;

mb::KSpec parse_k(const std::string& text) {
    mb::KSpec k;
    if (!text.empty() && text.back() == '%') {
        k.percent = true;
        k.value = std::stod(text.substr(0, text.size() - 1));
    } else {
        k.percent = false;
        k.value = std::stod(text);
    }
    if (!(k.value > 0.0))
        throw CLI::ValidationError("K values must be positive");
    return k;
}

std::string default_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty())
        return flag_value;
    if (const char* env = std::getenv("MB_CACHE_DIR"); env != nullptr && env[0] != '\0')
        return env;
    return ".mb-cache";
}

struct DetectOptions {
    std::string image;
    std::string detector = "tma-mcb";
    double eps = 1.0;
    std::string K = "50%", Kc = "50%", Ks = "50%";
    double s = 5.0;
    double step = 1.0;
    int bins = 1024;
    std::string out = ".";
    std::string dump_lines;
    std::string cache_dir;
    bool compat_literal_k = false;
    int hs_size = 512;
    double hs_sigma = 50.0;
    uint64_t hs_seed = 42;
    int hs_bins = 1000;
};

int run_detect(const DetectOptions& opt) {
    const auto detector = mb::parse_detector(opt.detector);
    if (!detector) {
        std::cerr << "unknown detector '" << opt.detector << "'\n";
        return kExitUsage;
    }

    mb::DetectorParams params;
    params.eps = opt.eps;
    params.K = parse_k(opt.K);
    params.Kc = parse_k(opt.Kc);
    params.Ks = parse_k(opt.Ks);
    params.s = opt.s;
    params.histogram_bins = opt.bins;
    params.literal_k_indexing = opt.compat_literal_k;

    const mb::RasterImage image = mb::load_image(opt.image, opt.step);
    const mb::GradientField field = mb::compute_gradient_field(image);

    const mb::TailHistogram* hc = nullptr;
    std::optional<mb::TailHistogram> hc_storage;
    if (mb::detector_uses_contrast(*detector)) {
        try {
            hc_storage = mb::build_contrast_histogram(field, params.histogram_bins);
            hc = &*hc_storage;
        } catch (const mb::DegenerateHistogramError&) {
            std::cout << "note: degenerate gradient histogram; nothing is contrasted\n";
        }
    }

    std::optional<mb::RegularityModel> model;
    if (mb::detector_uses_regularity(*detector)) {
        mb::RegularityModelParams mp{opt.s, opt.hs_size, opt.hs_sigma, opt.hs_seed, opt.hs_bins};
        bool hit = false;
        model = mb::load_or_estimate_regularity_model(default_cache_dir(opt.cache_dir), mp, &hit);
        std::cout << (hit ? "H_s cache hit" : "H_s estimated") << " (" << model->sample_count
                  << " samples)\n";
    }

    mb::LevelLineTree tree = mb::build_inclusion_tree(mb::extract_level_lines(image));
    const auto sections = mb::find_monotone_sections(tree);
    auto detections = mb::detect_boundaries(tree, field, *detector, params, hc,
                                            model ? &*model : nullptr);
    const auto maximal = mb::prune_maximal(tree, sections, detections);

    // fold the maximal flags back into the full list
    {
        size_t mi = 0;
        for (mb::Detection& d : detections) {
            while (mi < maximal.size() && maximal[mi].line_id < d.line_id)
                ++mi;
            if (mi < maximal.size() && maximal[mi].line_id == d.line_id)
                d.maximal = true;
        }
    }

    std::filesystem::create_directories(opt.out);
    mb::write_json_file(mb::detections_to_json(detections), opt.out + "/detections.json");
    mb::write_overlay_svg(image, tree, maximal, opt.out + "/overlay.svg");
    if (!opt.dump_lines.empty())
        mb::write_json_file(mb::lines_to_json(tree), opt.dump_lines);

    size_t meaningful = 0;
    for (const mb::Detection& d : detections)
        meaningful += d.meaningful;
    std::cout << "image: " << opt.image << "\n"
              << "detector: " << mb::detector_name(*detector) << "  eps: " << opt.eps << "\n"
              << "level lines (N_ll): " << tree.size() << "\n"
              << "meaningful: " << meaningful << "\n"
              << "maximal meaningful: " << maximal.size() << "\n"
              << "wrote " << opt.out << "/detections.json, " << opt.out << "/overlay.svg\n";
    return kExitOk;
}

struct StatsOptions {
    double s = 5.0;
    int noise_size = 512;
    double sigma = 50.0;
    uint64_t seed = 42;
    int bins = 1000;
    std::string cache_dir;
};

int run_prepare_stats(const StatsOptions& opt) {
    mb::RegularityModelParams mp{opt.s, opt.noise_size, opt.sigma, opt.seed, opt.bins};
    bool hit = false;
    const std::string dir = default_cache_dir(opt.cache_dir);
    const mb::RegularityModel model = mb::load_or_estimate_regularity_model(dir, mp, &hit);
    std::cout << (hit ? "cache hit: " : "estimated: ") << dir << "/"
              << mb::regularity_cache_name(mp) << "\n"
              << "samples: " << model.sample_count << "\n"
              << "bins: " << model.num_bins << ", tail(0) = " << model.tail(0.0)
              << ", tail(0.99) = " << model.tail(0.99) << "\n";
    return kExitOk;
}

struct ValidateOptions {
    std::vector<std::string> detectors;
    double eps = 1.0;
    int trials = 20;
    int size = 128;
    double sigma = 50.0;
    uint64_t seed = 1;
    bool quick = false;
    double s = 5.0;
    std::string cache_dir;
    int hs_size = 512;
    double hs_sigma = 50.0;
    uint64_t hs_seed = 42;
    int hs_bins = 1000;
    bool json = false;
};

int run_validate(const ValidateOptions& opt) {
    if (opt.trials < 10 && !opt.quick) {
        std::cerr << "need at least 10 trials (or pass --quick)\n";
        return kExitUsage;
    }
    std::vector<mb::Detector> detectors;
    if (opt.detectors.empty() ||
        (opt.detectors.size() == 1 && opt.detectors[0] == "all")) {
        detectors.assign(std::begin(mb::kAllDetectors), std::end(mb::kAllDetectors));
    } else {
        for (const std::string& name : opt.detectors) {
            const auto d = mb::parse_detector(name);
            if (!d) {
                std::cerr << "unknown detector '" << name << "'\n";
                return kExitUsage;
            }
            detectors.push_back(*d);
        }
    }

    mb::DetectorParams params;
    params.s = opt.s;

    std::optional<mb::RegularityModel> model;
    bool needs_model = false;
    for (mb::Detector d : detectors)
        needs_model = needs_model || mb::detector_uses_regularity(d);
    if (needs_model) {
        mb::RegularityModelParams mp{opt.s, opt.hs_size, opt.hs_sigma, opt.hs_seed, opt.hs_bins};
        model = mb::load_or_estimate_regularity_model(default_cache_dir(opt.cache_dir), mp);
    }

    const auto reports = mb::estimate_empirical_nfa_bounds(
        opt.trials, detectors, opt.eps, opt.size, opt.sigma, opt.seed, params,
        model ? &*model : nullptr);

    bool all_ok = true;
    std::printf("%-9s %8s %10s %10s %6s\n", "detector", "trials", "mean", "bound", "ok");
    nlohmann::json jreports = nlohmann::json::array();
    for (const mb::TrialReport& r : reports) {
        all_ok = all_ok && r.ok;
        std::printf("%-9s %8zu %10.4f %10.4f %6s\n", mb::detector_name(r.detector).c_str(),
                    r.seeds.size(), r.mean, r.bound, r.ok ? "yes" : "NO");
        jreports.push_back(mb::trial_report_to_json(r));
    }
    if (opt.json)
        std::cout << jreports.dump(2) << "\n";
    if (!all_ok) {
        for (const mb::TrialReport& r : reports)
            if (!r.ok)
                std::cerr << "bound violated: " << mb::detector_name(r.detector)
                          << " mean=" << r.mean << " > bound=" << r.bound << "\n";
        return kExitBound;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topographic-map boundary saliency: a contrario detection of "
                 "contrasted and regular level lines"};
    app.require_subcommand(1);

    DetectOptions det;
    CLI::App* cmd_detect = app.add_subcommand("detect", "Detect salient boundaries in a PGM image");
    cmd_detect->add_option("--image", det.image, "input PGM (P5 or P2, 8-bit)")->required();
    cmd_detect->add_option("--detector", det.detector,
                           "dmm-mcb|tma-mcb|dmm-mrb|dmm-mcrb|tma-mrb|tma-mcrb");
    cmd_detect->add_option("--eps", det.eps, "meaningfulness threshold (decimal or 1e-N)");
    cmd_detect->add_option("--K", det.K, "TMA contrast K: absolute or percentile like 50%");
    cmd_detect->add_option("--Kc", det.Kc, "TMA-MCRB contrast K");
    cmd_detect->add_option("--Ks", det.Ks, "TMA regularity K");
    cmd_detect->add_option("--s", det.s, "regularity arc scale")->check(CLI::PositiveNumber);
    cmd_detect->add_option("--step", det.step, "gray quantization step")->check(CLI::PositiveNumber);
    cmd_detect->add_option("--bins", det.bins, "contrast histogram bins")->check(CLI::Range(2, 1 << 20));
    cmd_detect->add_option("--out", det.out, "output directory");
    cmd_detect->add_option("--dump-lines", det.dump_lines, "write the level lines as JSON");
    cmd_detect->add_option("--cache-dir", det.cache_dir, "H_s cache directory (or $MB_CACHE_DIR)");
    cmd_detect->add_flag("--compat-literal-k", det.compat_literal_k,
                         "use the literal k-index tail arguments (study flag)");
    cmd_detect->add_option("--hs-size", det.hs_size, "H_s noise image size")->check(CLI::Range(64, 1 << 14));
    cmd_detect->add_option("--hs-sigma", det.hs_sigma, "H_s noise sigma")->check(CLI::PositiveNumber);
    cmd_detect->add_option("--hs-seed", det.hs_seed, "H_s noise seed");
    cmd_detect->add_option("--hs-bins", det.hs_bins, "H_s histogram bins")->check(CLI::Range(2, 1 << 20));

    StatsOptions st;
    CLI::App* cmd_stats = app.add_subcommand("prepare-stats", "Estimate and cache the H_s model");
    cmd_stats->add_option("--s", st.s, "regularity arc scale")->check(CLI::PositiveNumber);
    cmd_stats->add_option("--noise-size", st.noise_size, "noise image size")->check(CLI::Range(64, 1 << 14));
    cmd_stats->add_option("--sigma", st.sigma, "noise sigma")->check(CLI::PositiveNumber);
    cmd_stats->add_option("--seed", st.seed, "noise seed");
    cmd_stats->add_option("--bins", st.bins, "histogram bins")->check(CLI::Range(2, 1 << 20));
    cmd_stats->add_option("--cache-dir", st.cache_dir, "cache directory (or $MB_CACHE_DIR)");

    ValidateOptions val;
    CLI::App* cmd_validate = app.add_subcommand("validate", "Monte-Carlo check of the noise bounds");
    cmd_validate->add_option("--detector", val.detectors, "detector name or 'all' (repeatable)");
    cmd_validate->add_option("--eps", val.eps, "meaningfulness threshold")->check(CLI::NonNegativeNumber);
    cmd_validate->add_option("--trials", val.trials, "number of noise trials")->check(CLI::PositiveNumber);
    cmd_validate->add_option("--size", val.size, "noise image size")->check(CLI::Range(64, 1 << 14));
    cmd_validate->add_option("--sigma", val.sigma, "noise sigma")->check(CLI::PositiveNumber);
    cmd_validate->add_option("--seed", val.seed, "base seed (trial i uses seed+i)");
    cmd_validate->add_flag("--quick", val.quick, "allow fewer than 10 trials");
    cmd_validate->add_flag("--json", val.json, "also emit the JSON report");
    cmd_validate->add_option("--s", val.s, "regularity arc scale")->check(CLI::PositiveNumber);
    cmd_validate->add_option("--cache-dir", val.cache_dir, "H_s cache directory");
    cmd_validate->add_option("--hs-size", val.hs_size, "H_s noise image size")->check(CLI::Range(64, 1 << 14));
    cmd_validate->add_option("--hs-sigma", val.hs_sigma, "H_s noise sigma")->check(CLI::PositiveNumber);
    cmd_validate->add_option("--hs-seed", val.hs_seed, "H_s noise seed");
    cmd_validate->add_option("--hs-bins", val.hs_bins, "H_s histogram bins")->check(CLI::Range(2, 1 << 20));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_detect->parsed())
            return run_detect(det);
        if (cmd_stats->parsed())
            return run_prepare_stats(st);
        if (cmd_validate->parsed())
            return run_validate(val);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const mb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitUsage;
}
