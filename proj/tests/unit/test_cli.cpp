#include "bstab/cli.hpp"
#include "doctest.h"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;
using bstab::cli::dispatch;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "bstab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const char* name) {
    const fs::path p = fs::temp_directory_path() / ("bstab-test-" + std::to_string(::getpid()) + "-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct NoCacheEnv {
    NoCacheEnv() { ::unsetenv(bstab::cli::kCacheEnv); }
};

}  // namespace

TEST_CASE("charge of a skyscraper") {
    NoCacheEnv env;
    const Run r = run({"charge", "--class", "0,0,0,1", "--alpha", "1", "--beta", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "{\"re\":\"-1\",\"im\":\"0\",\"phase_frac\":1,\"phase_shift\":0}\n");
}

TEST_CASE("psi through the CLI") {
    NoCacheEnv env;
    const Run r = run({"psi", "--alpha", "1", "--beta", "0", "--b", "0", "--box", "8"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["closed_form"] == "1/6");
    CHECK(j["lower"] == "1/6");
}

TEST_CASE("irrational inputs fall back to doubles") {
    NoCacheEnv env;
    const Run r = run({"charge", "--class", "1,1,1/2,1/6", "--alpha", "sqrt(2)", "--beta", "0"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["re"].is_number());
}

TEST_CASE("exit codes") {
    NoCacheEnv env;
    CHECK(run({"charge", "--class", "x,y"}).code == 1);
    CHECK(run({"charge", "--class", "1,0,0,0"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"charge", "--class", "0,0,0,0", "--alpha", "1", "--beta", "0"}).code == 2);
    CHECK(run({"destab", "--class", "0,0,0,1", "--alpha", "1", "--beta", "0"}).code == 1);
    CHECK(run({"interval", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0", "--contains", "3.5"}).code == 0);
    CHECK(run({"interval", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0", "--contains", "100"}).code == 2);
    CHECK(run({"exc", "--mutate", "4:left"}).code == 1);
    CHECK(run({"window", "--class", "0,0,0,0", "--beta", "0"}).code == 1);
    CHECK(run({"window", "--class", "0,1,0,1/2", "--beta", "0"}).code == 2);
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("beta,alpha") != std::string::npos);
}

TEST_CASE("the installed binary reports exit codes") {
    const char* bin = std::getenv("BSTAB_CLI");
    if (!bin) return;
    const std::string b = std::string("\"") + bin + "\"";
    CHECK(WEXITSTATUS(std::system((b + " charge --class x,y >/dev/null 2>&1").c_str())) == 1);
    CHECK(WEXITSTATUS(std::system((b + " --no-cache witness --kind sky >/dev/null 2>&1").c_str())) == 0);
}

TEST_CASE("output does not depend on the worker count") {
    NoCacheEnv env;
    const std::vector<std::vector<std::string>> cmds = {
        {"destab", "--class", "1,0,0,-1", "--alpha", "1/4", "--beta", "-1/2", "--box", "6"},
        {"psi", "--alpha", "3/2", "--beta", "1/3", "--b", "1/2", "--box", "6"},
        {"gldim", "--alpha", "1", "--beta", "0.3", "--a", "2", "--b", "0.5"},
    };
    for (const auto& c : cmds) {
        auto one = c, many = c;
        one.insert(one.begin(), {"--workers", "1"});
        many.insert(many.begin(), {"--workers", "5"});
        const Run a = run(one), b = run(many);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("wall output formats") {
    NoCacheEnv env;
    const Run csv = run({"--output", "csv", "wall", "--v", "1,0,0,-1", "--w", "1,-1,1/2,-1/6", "--beta-range",
                         "-1:0", "--samples", "11"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("beta,alpha\n", 0) == 0);
    const Run svg = run({"--output", "svg", "wall", "--v", "1,0,0,-1", "--w", "1,-1,1/2,-1/6"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.rfind("<svg", 0) == 0);
    const Run js = run({"wall", "--v", "1,0,0,-1", "--w", "1,-1,1/2,-1/6"});
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["circle"]["center_beta"] == "-1/2");
    CHECK(j["circle"]["radius_squared"] == "1/4");
}

TEST_CASE("result cache") {
    const fs::path dir = scratch("cache");
    ::setenv(bstab::cli::kCacheEnv, dir.c_str(), 1);
    const std::vector<std::string> cmd = {"bg", "--class", "1,1,1/2,1/6", "--alpha", "1", "--beta", "0"};
    const Run first = run(cmd);
    REQUIRE(first.code == 0);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    REQUIRE(files.size() == 1);
    // A hit serves the stored bytes; prove it by planting a marker.
    { std::ofstream(files[0]) << "cached\n"; }
    CHECK(run(cmd).out == "cached\n");
    // Worker count is not part of the key; other config fields are.
    auto w = cmd;
    w.insert(w.begin(), {"--workers", "3"});
    CHECK(run(w).out == "cached\n");
    auto t = cmd;
    t.insert(t.begin(), {"--tolerance", "1e-6"});
    CHECK(run(t).out == first.out);
    auto nc = cmd;
    nc.insert(nc.begin(), "--no-cache");
    CHECK(run(nc).out == first.out);
    ::unsetenv(bstab::cli::kCacheEnv);
    fs::remove_all(dir);
}

TEST_CASE("config file") {
    NoCacheEnv env;
    const fs::path dir = scratch("config");
    const fs::path cfg = dir / "bstab.toml";
    { std::ofstream(cfg) << "box = 3\nwindow = 0.01\n"; }
    const Run r = run({"--config", cfg.string(), "psi", "--alpha", "1", "--beta", "0", "--b", "0"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["box_bound"] == 3);
    CHECK(j["nu_window"] == 0.01);
    const fs::path cache = dir / "c";
    { std::ofstream(cfg) << "cache-dir = \"" << cache.string() << "\"\n"; }
    CHECK(run({"--config", cfg.string(), "witness", "--kind", "sky"}).code == 0);
    CHECK(fs::exists(cache));
    fs::remove_all(dir);
}

TEST_CASE("other subcommands run") {
    NoCacheEnv env;
    for (const auto& c : std::vector<std::vector<std::string>>{
             {"bg", "--class", "1,1,1/2,1/6", "--alpha", "1", "--beta", "0"},
             {"monotone-form", "--class", "1,1,1/2,1/6", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0", "--c",
              "1"},
             {"region", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0", "--box", "3"},
             {"boundary", "--alpha", "1", "--beta", "0", "--a", "1/6", "--b", "0"},
             {"exc", "--collection", "beilinson:0", "--mutate", "1:left", "--phi", "0,1.5,3.6,6.1"},
             {"monotone", "--class", "1,1,1/2,1/6", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0"},
             {"window", "--class", "1,1,1/2,1/6", "--beta", "0"},
             {"witness", "--kind", "steiner:1,1[1]"},
             {"interval", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0", "--delta", "0.05"},
         }) {
        const Run r = run(c);
        CHECK_MESSAGE(r.code == 0, c[0] << ": " << r.err);
        CHECK(nlohmann::json::accept(r.out));
    }
    const auto mf = nlohmann::json::parse(
        run({"monotone-form", "--class", "1,1,1/2,1/6", "--alpha", "1", "--beta", "0", "--a", "1", "--b", "0", "--c",
             "1"})
            .out);
    CHECK(mf["value"] == "5/6");
}
