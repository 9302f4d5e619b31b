#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "weldkit/config.hpp"
#include "weldkit/error.hpp"

using namespace weldkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string out;  // stdout and stderr together
};

Outcome weldkit_cmd(const std::string& args) {
    const std::string cmd = std::string("\"") + WELDKIT_BIN + "\" " + args + " 2>&1";
    Outcome o;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) o.out.append(buf, n);
    const int raw = pclose(p);
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return o;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round trips and rejects unknown keys") {
    PipelineConfig c;
    c.seed = 99;
    c.synth.count = 5;
    c.ingest.letterbox = 320;
    c.deblur.nsr = 0.02;
    c.augment.include_original = true;
    c.split.group = false;
    c.eval.jitter = 0.75;
    const std::string text = config_to_json(c);
    CHECK(config_from_json(text) == c);
    CHECK(config_to_json(config_from_json(text)) == text);
    CHECK_THROWS_WITH_AS(config_from_json(R"({"seed": 1, "colour": 2})"), doctest::Contains("colour"),
                         ParameterError);
    CHECK_THROWS_AS(config_from_json(R"({"seed": "x"})"), ParameterError);
    CHECK_THROWS_AS(config_from_json(R"({"seed": )"), ParameterError);
}

TEST_CASE("unknown subcommand exits 2 with usage") {
    const Outcome o = weldkit_cmd("frobnicate");
    CHECK(o.status == 2);
    CHECK(o.out.find("Usage") != std::string::npos);
    CHECK(weldkit_cmd("").status == 2);
}

TEST_CASE("every subcommand has help listing its flags") {
    const std::map<std::string, std::vector<std::string>> flags = {
        {"ingest", {"--raw-width", "--raw-height", "--raw-depth", "--raw-endian", "--window", "--crop", "--letterbox"}},
        {"deblur", {"--speed", "--exposure", "--nsr", "--theta-step", "--vote-thresh", "--edge-thresh"}},
        {"augment", {"--multiplier", "--include-original", "--no-drop"}},
        {"convert", {"--from", "--to"}},
        {"split", {"--ratio", "--no-group"}},
        {"stats", {"--data", "--svg"}},
        {"anchors", {"--k", "--iters"}},
        {"eval", {"--detections", "--iou", "--conf", "--time-cmd"}},
        {"compare", {"--out"}},
        {"synth", {"scenes", "blur", "detections"}},
        {"pipeline", {"--out"}},
    };
    for (const auto& [sub, want] : flags) {
        const Outcome o = weldkit_cmd(sub + " --help");
        CAPTURE(sub);
        CHECK(o.status == 0);
        for (const auto& f : want) CHECK_MESSAGE(o.out.find(f) != std::string::npos, f);
    }
    const Outcome top = weldkit_cmd("--help");
    for (const char* f : {"--seed", "--jobs", "--config"}) CHECK(top.out.find(f) != std::string::npos);
}

TEST_CASE("parameter and input errors map to exit codes") {
    oracle::TempDir tmp("cli_codes");
    CHECK(weldkit_cmd("deblur --in " + quoted(tmp.path()) + " --out " + quoted(tmp.path() / "o") +
                      " --speed -1 --exposure 1")
              .status == 2);
    CHECK(weldkit_cmd("stats --data " + quoted(tmp.path() / "missing") + " --out " + quoted(tmp.path() / "s.json")).status == 1);
}

TEST_CASE("synth, convert and eval on perfect detections") {
    oracle::TempDir tmp("cli_perfect");
    const fs::path data = tmp.path() / "data";
    REQUIRE(weldkit_cmd("--seed 7 synth scenes --count 4 --out " + quoted(data)).status == 0);
    REQUIRE(weldkit_cmd("convert --data " + quoted(data) + " --from labelme --to yolo").status == 0);
    CHECK(fs::exists(data / "labels_yolo"));
    REQUIRE(weldkit_cmd("--seed 7 synth detections --data " + quoted(data) + " --out " +
                        quoted(tmp.path() / "det.txt") + " --miss 0 --fp 0 --jitter 0")
                .status == 0);
    const Outcome e = weldkit_cmd("eval --data " + quoted(data) + " --detections " + quoted(tmp.path() / "det.txt") +
                                  " --out " + quoted(tmp.path() / "report.json"));
    REQUIRE(e.status == 0);
    CHECK(e.out.find("mAP@0.5") != std::string::npos);
    CHECK(e.out.find("1.000") != std::string::npos);
    CHECK(read_file(tmp.path() / "report.json").find("\"map_50\": 1.0") != std::string::npos);
}

TEST_CASE("pipeline output is identical across runs and worker counts") {
    oracle::TempDir tmp("cli_pipeline");
    const fs::path cfg = tmp.path() / "cfg.json";
    PipelineConfig c;
    c.synth.count = 6;
    c.synth.width = c.synth.height = 128;
    c.augment.multiplier = 3;
    std::ofstream(cfg) << config_to_json(c);
    const fs::path a = tmp.path() / "a", b = tmp.path() / "b", d = tmp.path() / "d";
    REQUIRE(weldkit_cmd("--config " + quoted(cfg) + " --seed 11 --jobs 1 pipeline --out " + quoted(a)).status == 0);
    REQUIRE(weldkit_cmd("--config " + quoted(cfg) + " --seed 11 --jobs 3 pipeline --out " + quoted(b)).status == 0);
    REQUIRE(weldkit_cmd("--config " + quoted(cfg) + " --seed 12 --jobs 1 pipeline --out " + quoted(d)).status == 0);
    CHECK(oracle::tree_hash(a) == oracle::tree_hash(b));
    CHECK(oracle::tree_hash(a) != oracle::tree_hash(d));
    const PipelineConfig snap = config_from_json(read_file(a / "config.json"));
    CHECK(snap.seed == 11);
    CHECK(snap.synth.count == 6);
}

}
