#include "pfd/cli.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace pfd;

namespace {

std::string sample(const std::string& name) { return std::string(PFD_SAMPLES_DIR) + "/" + name; }

cli::JobSpec job(const std::string& cmd, std::vector<std::string> in = {}) {
    cli::JobSpec j;
    j.command = cmd;
    for (auto& f : in) j.inputs.push_back(sample(f));
    return j;
}

}  // namespace

TEST(Cli, Sha256KnownVector) {
    EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, CatalanCoefficients) {
    auto j = job("solve-implicit", {"catalan.json"});
    j.deg_cap = 8;
    auto r = cli::run(j);
    EXPECT_EQ(r.exit_code, cli::Pass);
    std::vector<std::string> want{"1", "1", "2", "5", "14", "42", "132", "429"};
    EXPECT_EQ(r.body["result"]["sigma_coefficients"][0].get<std::vector<std::string>>(), want);
}

TEST(Cli, B1PerfReport) {
    auto j = job("b1perf-verify");
    j.p = 2;
    j.h = 1;
    j.prec = Rational(12);
    auto r = cli::run(j);
    EXPECT_EQ(r.exit_code, cli::Pass);
    EXPECT_EQ(r.body["status"], "pass");
    EXPECT_EQ(r.body["checks"].size(), 3u);
    EXPECT_EQ(r.body["params"]["p"], 2);
}

TEST(Cli, FailuresCarryWitness) {
    auto r = cli::run(job("certify", {"natural.json"}));
    EXPECT_EQ(r.exit_code, cli::Fail);
    EXPECT_EQ(r.body["status"], "fail");
    for (const auto& c : r.body["checks"])
        if (!c["ok"].get<bool>()) EXPECT_FALSE(c["witness"].get<std::string>().empty());
}

TEST(Cli, ExitCodes) {
    std::string bad = testing::TempDir() + "/bad.json";
    std::ofstream(bad) << "{\"p\": ";
    cli::JobSpec j;
    j.command = "unit-transfer";
    j.inputs = {bad};
    auto r = cli::run(j);
    EXPECT_EQ(r.exit_code, cli::ParseError);
    EXPECT_EQ(cli::run(job("no-such-command")).exit_code, cli::ParseError);
    EXPECT_EQ(cli::run(job("lift")).exit_code, cli::ParseError);

    // a non-unit is a precondition failure
    std::string nonunit = testing::TempDir() + "/nonunit.json";
    std::ofstream(nonunit) << R"({"p":2,"char":0,"level":2,"cap":"6","terms":[["1/4",1]]})";
    j.inputs = {nonunit};
    auto e = cli::run(j);
    EXPECT_EQ(e.exit_code, cli::DomainError);
    EXPECT_EQ(e.body["status"], "error");
    EXPECT_EQ(e.body["error"]["kind"], "precondition_error");
}

TEST(Cli, ReportsAreDeterministic) {
    std::vector<cli::JobSpec> jobs{job("solve-implicit", {"catalan.json"}), job("certify", {"catalan.json"}),
                                   job("pullback-check", {"catalan.json"}), job("tilt-sharp", {"tilt.json"}),
                                   job("unit-transfer", {"unit.json"}), job("cubical-homology"),
                                   job("cylinder-check"), job("face-intersect", {"faces_four.json"}),
                                   job("exactness-check", {"faces_two.json"}), job("lift", {"lift.json"}),
                                   job("approximate-tuple", {"tuple.json"}), job("homotopy-factor", {"homotopy.json"})};
    for (auto& j : jobs) {
        j.seed = 9;
        auto a = cli::run(j), b = cli::run(j);
        EXPECT_EQ(cli::render(a), cli::render(b)) << j.command;
        EXPECT_EQ(a.exit_code, cli::Pass) << j.command << " " << cli::render(a).substr(0, 400);
        EXPECT_EQ(a.body["seed"], 9);
        EXPECT_FALSE(a.body.contains("timing"));
    }
}

TEST(Cli, EveryCommandIsListed) {
    std::vector<std::string> want{"solve-implicit", "certify", "homotopy-factor", "pullback-check",
                                  "tilt-sharp", "unit-transfer", "b1perf-verify", "cubical-homology",
                                  "cylinder-check", "face-intersect", "exactness-check", "lift",
                                  "approximate-tuple"};
    EXPECT_EQ(cli::commands(), want);
}
