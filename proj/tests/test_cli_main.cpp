// End-to-end checks of the mb binary: exit codes, output artifacts, and
// byte-identical re-runs. The binary path comes in through MB_BIN.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mb/raster.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "mb_cli_tests";

int run(const std::string& args) {
    const std::string cmd = std::string(MB_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Setup {
    Setup() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
        mb::save_pgm(fixtures::disk_cone(), (kWork / "disk.pgm").string());
        mb::save_pgm(fixtures::constant(32, 32, 64.0), (kWork / "constant.pgm").string());
        setenv("MB_CACHE_DIR", (kWork / "cache").c_str(), 1);
    }
};
const Setup setup;

}  // namespace

TEST_CASE("detect: disk fixture produces artifacts and is deterministic") {
    const std::string img = (kWork / "disk.pgm").string();
    const std::string out = (kWork / "out_disk").string();
    REQUIRE(run("detect --image " + img + " --detector tma-mcb --eps 1 --K 50% --out " + out) == 0);

    const auto dets = nlohmann::json::parse(slurp(out + "/detections.json"));
    REQUIRE(dets.is_array());
    CHECK(dets.size() > 100);
    size_t meaningful = 0, maximal = 0;
    for (const auto& d : dets) {
        CHECK(d.contains("line_id"));
        CHECK(d.contains("log10_nfa"));
        CHECK(d.contains("meaningful"));
        meaningful += d["meaningful"].get<bool>();
        maximal += d.value("maximal", false);
    }
    CHECK(meaningful > 10);
    CHECK(maximal == 1);  // the nested bundle collapses

    const std::string svg = slurp(out + "/overlay.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("data:image/bmp;base64,") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);

    const std::string out2 = (kWork / "out_disk2").string();
    REQUIRE(run("detect --image " + img + " --detector tma-mcb --eps 1 --K 50% --out " + out2) == 0);
    CHECK(slurp(out + "/detections.json") == slurp(out2 + "/detections.json"));
    CHECK(slurp(out + "/overlay.svg") == slurp(out2 + "/overlay.svg"));
}

TEST_CASE("detect: constant image gives valid empty outputs") {
    const std::string out = (kWork / "out_const").string();
    REQUIRE(run("detect --image " + (kWork / "constant.pgm").string() + " --out " + out) == 0);
    const auto dets = nlohmann::json::parse(slurp(out + "/detections.json"));
    CHECK(dets.is_array());
    CHECK(dets.empty());
    CHECK(slurp(out + "/overlay.svg").find("<svg") != std::string::npos);
}

TEST_CASE("detect: line dump carries the tree") {
    const std::string out = (kWork / "out_dump").string();
    const std::string dump = (kWork / "lines.json").string();
    REQUIRE(run("detect --image " + (kWork / "disk.pgm").string() + " --out " + out +
                " --dump-lines " + dump) == 0);
    const auto lines = nlohmann::json::parse(slurp(dump));
    REQUIRE(lines.is_array());
    CHECK(lines.size() > 100);
    size_t roots = 0;
    for (const auto& l : lines) {
        CHECK(l.contains("id"));
        CHECK(l.contains("level"));
        CHECK(l.contains("length"));
        CHECK(l.contains("n"));
        CHECK(l.contains("points"));
        roots += l["parent"].is_null();
    }
    CHECK(roots == 1);
}

TEST_CASE("detect: regularity detector builds and reuses the H_s cache") {
    const std::string img = (kWork / "disk.pgm").string();
    const std::string out = (kWork / "out_mcrb").string();
    // small H_s parameters keep the estimation cheap
    const std::string hs = " --hs-size 128 --hs-bins 200";
    REQUIRE(run("detect --image " + img + " --detector tma-mcrb --eps 1 --out " + out + hs) == 0);
    bool cache_seen = false;
    for (const auto& e : fs::directory_iterator(kWork / "cache"))
        cache_seen = cache_seen || e.path().filename().string().starts_with("hs_");
    CHECK(cache_seen);
    REQUIRE(run("detect --image " + img + " --detector tma-mcrb --eps 1 --out " + out + hs) == 0);
}

TEST_CASE("cli exit codes") {
    CHECK(run("detect --image " + (kWork / "nope.pgm").string() + " --out " + (kWork / "x").string()) == 2);
    CHECK(run("detect") == 1);                          // missing required flag
    CHECK(run("frobnicate") == 1);                      // unknown subcommand
    CHECK(run("detect --image x.pgm --detector bogus --out " + (kWork / "x").string()) == 1);
    CHECK(run("prepare-stats --s 0") == 1);             // violated precondition
    CHECK(run("validate --trials 3") == 1);             // < 10 without --quick
    CHECK(run("validate --detector bogus --trials 10") == 1);
}

TEST_CASE("prepare-stats: idempotent cache") {
    const std::string args = "prepare-stats --s 5 --noise-size 128 --sigma 50 --seed 42 --bins 200";
    REQUIRE(run(args) == 0);
    const fs::path cache = kWork / "cache" / "hs_s5_n128_sig50_seed42_b200.txt";
    REQUIRE(fs::exists(cache));
    const std::string first = slurp(cache);
    REQUIRE(run(args) == 0);  // cache hit
    CHECK(slurp(cache) == first);
}

TEST_CASE("detect: scientific epsilon and a non-unit quantization step") {
    const std::string img = (kWork / "disk.pgm").string();
    const std::string out = (kWork / "out_eps").string();
    REQUIRE(run("detect --image " + img + " --detector tma-mcb --eps 1e-10 --out " + out) == 0);
    const auto strict = nlohmann::json::parse(slurp(out + "/detections.json"));
    REQUIRE(run("detect --image " + img + " --detector tma-mcb --eps 1 --out " + out) == 0);
    const auto loose = nlohmann::json::parse(slurp(out + "/detections.json"));
    size_t ns = 0, nl = 0;
    for (const auto& d : strict)
        ns += d["meaningful"].get<bool>();
    for (const auto& d : loose)
        nl += d["meaningful"].get<bool>();
    CHECK(ns <= nl);
    CHECK(nl > 0);

    const std::string out2 = (kWork / "out_step").string();
    REQUIRE(run("detect --image " + img + " --detector dmm-mcb --step 2 --out " + out2) == 0);
    const auto coarse = nlohmann::json::parse(slurp(out2 + "/detections.json"));
    CHECK(coarse.size() > 0);
    CHECK(coarse.size() < loose.size());  // half the levels, about half the lines
}

TEST_CASE("validate: quick noise run is quiet") {
    CHECK(run("validate --detector tma-mcb --detector dmm-mcb --eps 1 --trials 4 --quick "
              "--size 64 --seed 1") == 0);
    CHECK(run("validate --detector dmm-mcb --eps 0 --trials 10 --size 64") == 0);
}
