#include <doctest.h>

#include <filesystem>
#include <string>

#include "helpers.hpp"
#include "streamsage/harness.hpp"
#include "streamsage/schema.hpp"

using namespace streamsage;
using testutil::run_cli;

namespace {

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

// Two numeric features, binary target decided by the first feature.
std::string write_dataset(const std::string& name, int rows) {
    const std::string path = testutil::temp_path(name);
    std::string body = "f0,f1,y\n";
    RngHandle rng(404);
    for (int r = 0; r < rows; ++r) {
        const double a = rng.uniform01(), b = rng.uniform01();
        body += std::to_string(a) + "," + std::to_string(b) + "," + (a > 0.5 ? "1" : "0") + "\n";
    }
    testutil::write_file(path, body);
    return path;
}

std::string write_schema(const std::string& name) {
    const std::string path = testutil::temp_path(name);
    testutil::numeric_schema(2, TargetKind::klass, 2).save(path);
    return path;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("default explanation contract on the synthetic stream") {
    const std::string out = testutil::temp_path("traj_default.csv");
    const auto res = run_cli("explain --stream agrawal:1 --model hoeffding --alpha 0.001 "
                             "--inner-samples 5 --steps 20000 --seed 7 --out " + out);
    CAPTURE(res.output);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("seed: 7") != std::string::npos);
    CHECK(res.output.find("steps: 20000") != std::string::npos);
    CHECK(res.output.find("explanation outputs: 19999") != std::string::npos);
    // 19999 explained steps, each one empty-set refresh plus 9 features x 5 draws
    CHECK(res.output.find("model evaluations (explain): 919954") != std::string::npos);

    REQUIRE(std::filesystem::exists(out));
    CHECK(count_lines(testutil::read_file(out)) == 20001); // header + one row per step
    const Trajectory traj = parse_trajectory(out);
    CHECK(traj.dim == 9);
    CHECK(traj.points.size() == 20000);
    CHECK(traj.points.back().t == 20000);
}

TEST_CASE("window estimator reports one output per recompute") {
    const std::string out = testutil::temp_path("traj_sw.csv");
    const auto res = run_cli("explain --stream agrawal:1 --model constant:0.5,0.5 "
                             "--estimator swsage --window 50 --stride 10 --steps 300 "
                             "--seed 11 --out " + out);
    CAPTURE(res.output);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("explanation outputs: 26") != std::string::npos);
    const Trajectory traj = parse_trajectory(out);
    REQUIRE(traj.points.size() == 26);
    CHECK(traj.points.front().t == 50);
    CHECK(traj.points.back().t == 300);
}

TEST_CASE("csv streams run against an explicit schema") {
    const std::string data = write_dataset("cli_rows.csv", 40);
    const std::string schema = write_schema("cli_schema.json");
    const std::string out = testutil::temp_path("traj_csv.csv");
    const auto res = run_cli("explain --stream csv,path=" + data + " --schema " + schema +
                             " --model sgd_logistic --steps 40 --seed 1 --out " + out);
    CAPTURE(res.output);
    REQUIRE(res.exit_code == 0);
    CHECK(parse_trajectory(out).points.size() == 40);
}

TEST_CASE("identical seeds reproduce the trajectory byte for byte") {
    const std::string out1 = testutil::temp_path("rep1.csv");
    const std::string out2 = testutil::temp_path("rep2.csv");
    const std::string out3 = testutil::temp_path("rep3.csv");
    const std::string base = "explain --stream agrawal:2 --model sgd_logistic --steps 500 ";
    REQUIRE(run_cli(base + "--seed 123 --out " + out1).exit_code == 0);
    REQUIRE(run_cli(base + "--seed 123 --out " + out2).exit_code == 0);
    REQUIRE(run_cli(base + "--seed 124 --out " + out3).exit_code == 0);
    const std::string a = testutil::read_file(out1);
    CHECK(a == testutil::read_file(out2));
    CHECK(a != testutil::read_file(out3));
}

TEST_CASE("usage errors exit with status 2") {
    const auto bad_alpha = run_cli("explain --stream agrawal:1 --alpha 1.5 --steps 10");
    CHECK(bad_alpha.exit_code == 2);
    CHECK(bad_alpha.output.find("usage error") != std::string::npos);
    CHECK(bad_alpha.output.find("--alpha") != std::string::npos);

    CHECK(run_cli("explain --steps 10").exit_code == 2);            // missing --stream
    CHECK(run_cli("explain --stream agrawal:1 --bogus 1").exit_code == 2);
    CHECK(run_cli("gt --reps 0 --seed 1").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("explain --stream agrawal:1 --estimator magic --steps 5").exit_code == 2);
    CHECK(run_cli("explain --stream agrawal:1 --removal none --steps 5").exit_code == 2);
    CHECK(run_cli("static-check --stream agrawal:1 --model constant:0.5,0.5").exit_code == 2);
}

TEST_CASE("help is not an error") {
    const auto res = run_cli("--help");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("explain") != std::string::npos);
    CHECK(res.output.find("static-check") != std::string::npos);
}

TEST_CASE("runtime failures exit with status 1 and name the culprit") {
    const std::string schema = write_schema("cli_schema_missing.json");
    const std::string absent = testutil::temp_path("no_such_data.csv");
    const auto res = run_cli("static-check --stream csv,path=" + absent + " --schema " + schema +
                             " --model constant:0.5,0.5 --seed 1");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find(absent) != std::string::npos);
}

TEST_CASE("static check passes on a frozen constant model") {
    const std::string data = write_dataset("cli_static.csv", 120);
    const std::string schema = write_schema("cli_static_schema.json");
    const auto res = run_cli("static-check --stream csv,path=" + data + " --schema " + schema +
                             " --model constant:0.5,0.5 --reps 3 --inner-samples 2 --seed 5");
    CAPTURE(res.output);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("static-check: PASS") != std::string::npos);
}

} // TEST_SUITE
