#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multspec/cli.hpp"

using namespace multspec;

namespace {

struct CliResult {
    int rc = -1;
    std::string out;
};

// Runs the CLI entry point in-process with stdout redirected to a scratch
// file so both the exit code and the exact bytes written can be asserted.
CliResult run_capture(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("multspec");
    for (const auto& a : args) argv.push_back(a.c_str());

    std::cout.flush();
    std::fflush(stdout);
    int saved = ::dup(1);
    char path[] = "/tmp/multspec_cli_XXXXXX";
    int fd = ::mkstemp(path);
    ::dup2(fd, 1);

    CliResult res;
    res.rc = run_cli(static_cast<int>(argv.size()), argv.data());

    std::cout.flush();
    std::fflush(stdout);
    ::dup2(saved, 1);
    ::close(saved);

    ::lseek(fd, 0, SEEK_SET);
    char buf[4096];
    ssize_t n;
    while ((n = ::read(fd, buf, sizeof buf)) > 0)
        res.out.append(buf, static_cast<std::size_t>(n));
    ::close(fd);
    ::unlink(path);
    return res;
}

const std::string kHardy2 = R"({"variant":"hardy","p":2})";
const std::string kBloch05 = R"({"variant":"bloch","alpha":0.5})";

}  // namespace

TEST_CASE("verify suites pass in-process and reject unknown names") {
    std::vector<VerifyRow> rows = run_verify_suite("all");
    REQUIRE(!rows.empty());
    for (const VerifyRow& row : rows) {
        CAPTURE(row.suite);
        CAPTURE(row.name);
        CHECK(row.pass);
    }
    std::vector<VerifyRow> one = run_verify_suite("parseval");
    CHECK(one.size() < rows.size());
    CHECK_THROWS_AS(run_verify_suite("nope"), std::invalid_argument);
}

TEST_CASE("help and argument errors map to the documented exit codes") {
    CHECK(run_capture({"--help"}).rc == 0);
    CHECK(run_capture({}).rc == 2);                       // subcommand required
    CHECK(run_capture({"norm", "-u", "z +", "--space", kHardy2}).rc == 2);
    CHECK(run_capture({"norm", "--space", kHardy2}).rc == 2);  // missing symbol
    CHECK(run_capture({"norm", "-u", "z", "--space", "{\"variant\":\"weird\"}"}).rc == 2);
    CHECK(run_capture({"verify", "--suite", "nope"}).rc == 2);
    CHECK(run_capture({"peak-scan", "-u", "z", "--xi", "1", "--space", kBloch05,
                       "--kmax", "4"}).rc == 2);
}

TEST_CASE("norm subcommand emits a parseable report") {
    CliResult r = run_capture({"norm", "-u", "z", "--space", kHardy2});
    REQUIRE(r.rc == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(j.at("truncated_estimate").get<bool>());

    // a quotient expands to the full series budget: flagged on sup-type norms
    CliResult q = run_capture({"norm", "-u", "1/(2 - z)", "--space", kBloch05});
    REQUIRE(q.rc == 0);
    nlohmann::json jq = nlohmann::json::parse(q.out);
    CHECK(jq.at("truncated_estimate").get<bool>());
    CHECK(jq.at("lower").get<double>() <= jq.at("value").get<double>());
    CHECK(jq.at("value").get<double>() <= jq.at("upper").get<double>());
}

TEST_CASE("spectrum subcommand is deterministic and can draw") {
    CliResult a = run_capture({"spectrum", "-u", "z^2"});
    CliResult b = run_capture({"spectrum", "-u", "z^2"});
    REQUIRE(a.rc == 0);
    CHECK(a.out == b.out);
    nlohmann::json j = nlohmann::json::parse(a.out);
    CHECK(j.at("kind") == "spectrum");
    CHECK(j.at("radius").get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    const char* svg_path = "/tmp/multspec_test_cli.svg";
    CliResult s = run_capture({"spectrum", "-u", "z", "--svg", svg_path});
    REQUIRE(s.rc == 0);
    std::ifstream in(svg_path);
    REQUIRE(in.good());
    std::stringstream body;
    body << in.rdbuf();
    CHECK(body.str().rfind("<svg", 0) == 0);
    ::unlink(svg_path);
}

TEST_CASE("hypothesis gating exits with its own code") {
    CliResult f = run_capture({"fredholm", "-u", "z", "--lambda", "0",
                               "--space", R"({"variant":"hardy","p":1})"});
    CHECK(f.rc == 3);
    nlohmann::json j = nlohmann::json::parse(f.out);
    CHECK(j.at("error") == "hypothesis_not_met");

    CliResult e = run_capture({"ess-spectrum", "-u", "z", "--space",
                               R"({"variant":"bergman_sobolev","p":2,"alpha":0,"beta":0.75})"});
    CHECK(e.rc == 3);
    nlohmann::json je = nlohmann::json::parse(e.out);
    CHECK_FALSE(je.at("hypotheses_met").get<bool>());

    CliResult ok = run_capture({"ess-spectrum", "-u", "z", "--space", kBloch05});
    CHECK(ok.rc == 0);
    nlohmann::json jok = nlohmann::json::parse(ok.out);
    CHECK(jok.at("kind") == "essential");
    CHECK(jok.at("hypotheses_met").get<bool>());
}

TEST_CASE("fredholm and multiplier subcommands report verdicts") {
    CliResult f = run_capture({"fredholm", "-u", "z*(z - 0.5)*(z - 2)", "--lambda", "0",
                               "--space", kHardy2});
    REQUIRE(f.rc == 0);
    nlohmann::json j = nlohmann::json::parse(f.out);
    CHECK(j.at("fredholm").get<bool>());
    CHECK(j.at("index").get<int>() == -2);
    CHECK(j.at("interior_zeros").size() == 2);

    CliResult m = run_capture({"multiplier", "-u", "z", "--space", kBloch05});
    REQUIRE(m.rc == 0);
    nlohmann::json jm = nlohmann::json::parse(m.out);
    CHECK(jm.at("verdict") == "yes");
}

TEST_CASE("peak scans stream CSV") {
    CliResult r = run_capture({"peak-scan", "-u", "(1 + z)/2", "--xi", "-1",
                               "--space", kBloch05, "--kmax", "64"});
    REQUIRE(r.rc == 0);
    CHECK(r.out.rfind("k,norm_ratio", 0) == 0);
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 5);  // header + k = 8, 16, 32, 64
}

TEST_CASE("config files can supply every flag") {
    const char* cfg_path = "/tmp/multspec_test_cfg.json";
    {
        nlohmann::json cfg{{"symbol", "z"},
                           {"space", nlohmann::json{{"variant", "hardy"}, {"p", 2}}}};
        std::ofstream out(cfg_path);
        out << cfg.dump();
    }
    CliResult r = run_capture({"norm", "--config", cfg_path});
    REQUIRE(r.rc == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));

    // explicit flags take precedence over the file
    CliResult over = run_capture({"norm", "-u", "3", "--config", cfg_path});
    nlohmann::json jo = nlohmann::json::parse(over.out);
    CHECK(jo.at("value").get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    ::unlink(cfg_path);
}
