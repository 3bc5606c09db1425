#include "gig/io.hpp"
#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args, const fs::path& cwd = {}) {
    std::string cmd;
    if (!cwd.empty()) cmd = "cd '" + cwd.string() + "' && ";
    cmd += std::string("'") + GIG_CLI + "' " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path copy_cohort(const testing::TempDir& dir) {
    auto dst = dir / "cohort";
    fs::copy(testing::fixture("cohort"), dst, fs::copy_options::recursive);
    return dst;
}

} // namespace

TEST_CASE("usage errors and help") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
    for (const char* sub : {"preprocess", "build-graphs", "export", "nullmodel", "orbits", "compare-orbits", "metrics"})
        CHECK(run(std::string(sub) + " --help").code == 0);
    CHECK(run("metrics").code == 2);
    CHECK(run("preprocess --tau abc").code == 2);
    CHECK(run("preprocess --config /nonexistent/config.toml").code == 2);
    CHECK(run("nullmodel --kind bogus --in . --out x").code == 2);
}

TEST_CASE("metrics subcommand") {
    testing::TempDir dir;
    gig::write_file_atomic(dir / "scores.tsv", "sample_id\ttrue_class\tscore_a\tscore_b\n"
                                               "S1\ta\t0.8\t0.2\nS2\ta\t0.3\t0.7\nS3\tb\t0.1\t0.9\nS4\tb\t0.4\t0.6\n");
    auto r = run("metrics --scores '" + (dir / "scores.tsv").string() + "' --out '" + (dir / "m").string() + "'");
    REQUIRE(r.code == 0);
    auto report = nlohmann::json::parse(r.out);
    CHECK(report["accuracy"].get<double>() == doctest::Approx(0.75));
    CHECK(report["macro_f1"].get<double>() == doctest::Approx(0.733333).epsilon(1e-6));
    CHECK(fs::exists(dir / "m" / "roc.tsv"));
    CHECK(fs::exists(dir / "m" / "run_log.jsonl"));

    gig::write_file_atomic(dir / "bad.tsv", "S1\ta\tnot-a-number\n");
    CHECK(run("metrics --scores '" + (dir / "bad.tsv").string() + "'").code == 1);
    CHECK(run("metrics --scores '" + (dir / "missing.tsv").string() + "'").code != 0);
}

TEST_CASE("pipeline on the fixture cohort") {
    testing::TempDir dir;
    auto cohort = copy_cohort(dir);
    REQUIRE(run("preprocess --config config.toml --threads 2", cohort).code == 0);
    REQUIRE(run("build-graphs --config config.toml", cohort).code == 0);
    REQUIRE(run("export --config config.toml", cohort).code == 0);
    auto out = cohort / "out";
    CHECK(fs::exists(out / "dataset" / "manifest.json"));
    CHECK(gig::read_file(out / "dataset" / "exclusions.tsv") ==
          "S26\ttoo-small\nS27\tno-pathways\nS28\tno-edges\n");

    auto log = gig::read_file(out / "run_log.jsonl");
    CHECK(std::count(log.begin(), log.end(), '\n') == 3);
    auto first = nlohmann::json::parse(log.substr(0, log.find('\n')));
    CHECK(first["subcommand"] == "preprocess");
    CHECK(first["exit_code"] == 0);
    CHECK(first.contains("config_sha256"));

    // orbit tools on the built graphs
    REQUIRE(run("orbits --in out/graphs --out out/orbits.tsv", cohort).code == 0);
    REQUIRE(run("nullmodel --kind dp --seed 3 --in out/graphs --out out/dp", cohort).code == 0);
    REQUIRE(run("orbits --in out/dp --out out/dp_orbits.tsv", cohort).code == 0);
    auto cmp = run("compare-orbits --orbits out/orbits.tsv --labels labels.tsv", cohort);
    REQUIRE(cmp.code == 0);
    CHECK(cmp.out.starts_with("orbit\tgroup_a\t"));
    CHECK(std::count(cmp.out.begin(), cmp.out.end(), '\n') == 16);

    // a missing pathway in offline mode is an environment error; no network is touched
    fs::remove(cohort / "gpml" / "WP9001.gpml");
    CHECK(run("build-graphs --config config.toml", cohort).code == 3);
    CHECK(run("build-graphs --config config.toml --tau 150", cohort).code == 2);
}
