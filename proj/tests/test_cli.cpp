#include "hmfac/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using hmfac::json;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "hmfac");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = hmfac::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

} // namespace

TEST(Cli, EnumerateCountsStrata)
{
    const auto o = run({"strata", "enumerate", "--profile", "p=3;f=1,1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto r = o.report();
    EXPECT_EQ(r["schema"], "1");
    EXPECT_EQ(r["count"], 9);
    EXPECT_EQ(r["strata"].size(), 9u);

    const auto c1 = run({"strata", "enumerate", "--profile", "p=3;f=1,1", "--codim", "1"}).report();
    EXPECT_EQ(c1["count"], 4);
    const auto c2 = run({"strata", "enumerate", "--profile", "p=3;f=2", "--codim", "0"}).report();
    EXPECT_EQ(c2["count"], 4);
}

TEST(Cli, SuitePassesOnTheReferenceProfile)
{
    const auto o = run({"suite", "--profile", "p=3;f=2,1", "--den", "24"});
    ASSERT_EQ(o.code, 0) << o.out;
    const auto r = o.report();
    EXPECT_TRUE(r["pass"].get<bool>());
    ASSERT_FALSE(r["checks"].empty());
    for (const auto& c : r["checks"])
        EXPECT_EQ(c["status"], "pass") << c["name"];
}

TEST(Cli, ReportsAreIdenticalAcrossWorkerCounts)
{
    const std::vector<std::string> base = {"suite", "--profile", "p=3;f=1,1", "--den", "12"};
    auto with = [&](const char* w) {
        auto a = base;
        a.push_back("--workers");
        a.push_back(w);
        return run(a).out;
    };
    const auto one = with("1");
    EXPECT_EQ(with("4"), one);
    EXPECT_EQ(with("8"), one);

    ::setenv("TOOL_WORKERS", "3", 1);
    const auto env = run(base).out;
    ::unsetenv("TOOL_WORKERS");
    EXPECT_EQ(env, one);
}

TEST(Cli, CoverageFailsForTwoWithInertDegreeTwo)
{
    const auto o = run({"regions", "coverage", "--profile", "p=2;f=2"});
    EXPECT_EQ(o.code, 1);
    EXPECT_FALSE(o.report()["pass"].get<bool>());
    EXPECT_EQ(run({"regions", "coverage", "--profile", "p=5;f=2,1"}).code, 0);
}

TEST(Cli, SigmaUpOnTwoFindsNothingAtDegreeLevel)
{
    // Raynaud, Hodge and genericity already exclude every can-test violation
    // here; only dropping genericity produces counterexamples.
    EXPECT_EQ(run({"verify", "sigma-up", "--profile", "p=2;f=2", "--den", "8"}).code, 0);
    const auto o = run({"verify", "sigma-up", "--profile", "p=2;f=2", "--den", "8", "--drop-genericity"});
    EXPECT_EQ(o.code, 1);
    EXPECT_GT(o.report()["counterexample_count"].get<int>(), 0);
    const auto ctl = run({"verify", "sigma-up", "--profile", "p=3;f=2", "--den", "8", "--p2-negative-control"});
    EXPECT_EQ(ctl.report()["negative_control"], "p=2");
    EXPECT_EQ(ctl.report()["profile"]["p"], 2);
}

TEST(Cli, UsageErrorsExitTwoWithJson)
{
    for (const auto& bad : std::vector<std::string>{"p=4;f=1", "p=3", "p=3;f=0", "q=3;f=1", "p=3;f=1,x"}) {
        const auto o = run({"strata", "enumerate", "--profile", bad});
        EXPECT_EQ(o.code, 2) << bad;
        const auto r = o.report();
        EXPECT_EQ(r.begin().key(), "schema");
        EXPECT_TRUE(r.contains("error"));
    }
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"verify", "sigma-up", "--profile", "p=3;f=1", "--den", "0"}).code, 2);
    EXPECT_EQ(run({"verify", "sigma-up", "--profile", "p=3;f=3,3", "--den", "20000"}).code, 2);
    EXPECT_EQ(run({"regions", "check", "--profile", "p=3;f=1", "--point", "{oops"}).code, 2);
}

TEST(Cli, OutWritesTheFile)
{
    const auto path = std::filesystem::temp_directory_path() / "hmfac_cli_out.json";
    std::filesystem::remove(path);
    const auto o = run({"strata", "enumerate", "--profile", "p=3;f=1", "--out", path.string()});
    EXPECT_EQ(o.code, 0);
    EXPECT_TRUE(o.out.empty());
    std::ifstream f(path);
    const auto r = json::parse(f);
    EXPECT_EQ(r["count"], 3);
    std::filesystem::remove(path);
}

TEST(Cli, GaussQuadraticAtFive)
{
    const auto o = run({"gauss", "--q", "5", "--char-exp", "2"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto r = o.report();
    EXPECT_EQ(r["order"], 2);
    // Values of psi live in Q(zeta_2) and those of the additive character in Q(zeta_5).
    EXPECT_EQ(r["conductor"], 10);
    EXPECT_EQ(run({"gauss", "--q", "6", "--char-exp", "1"}).code, 2);
}

TEST(Cli, TwistRunsWithControl)
{
    const auto o = run({"verify", "twist", "--q", "3", "--n", "4", "--trials", "10", "--seed", "42"});
    ASSERT_EQ(o.code, 0) << o.out;
    const auto r = o.report();
    EXPECT_EQ(r["failures"], 0);
    EXPECT_TRUE(r["negative_control"]["pass"].get<bool>());
}

TEST(Cli, RegionCheckOnPoints)
{
    auto check = [](const std::string& point, const std::string& region) {
        return run({"regions", "check", "--profile", "p=3;f=2", "--point", point, "--region", region}).report();
    };
    auto r = check(R"({"deg":{"0/0":"1/2","0/1":"0"},"generic":true})", "sigma");
    EXPECT_EQ(r["membership"], "in");
    EXPECT_EQ(r["case"], "2b");
    r = check(R"({"deg":{"0/0":"1","0/1":"1"},"generic":true})", "vcan");
    EXPECT_EQ(r["membership"], "in");
    r = check(R"({"deg":{"0/0":"1/4","0/1":"1/4"},"generic":true})", "vcan");
    EXPECT_EQ(r["membership"], "out");
    EXPECT_EQ(run({"regions", "check", "--profile", "p=3;f=2", "--point", R"({"deg":{"0/0":"0","0/1":"0"}})",
                   "--region", "sigmaS"})
                  .code,
              2);
}
