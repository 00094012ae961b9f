#include <doctest.h>

#include <cmath>

#include "fjsp/bench.hpp"
#include "fjsp/heuristics.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

TEST_CASE("optimality gap arithmetic") {
    CHECK(optimality_gap(110, 100) == 0.10);
    CHECK(optimality_gap(100, 100) == 0.0);
    CHECK(optimality_gap(95, 100) == -0.05);
    CHECK_THROWS_AS(optimality_gap(10, 0), std::invalid_argument);
}

TEST_CASE("shifted geometric mean") {
    CHECK(shifted_geomean({0.10, 0.20}) == doctest::Approx(0.14891).epsilon(1e-4));
    CHECK(shifted_geomean({0.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(shifted_geomean({0.37}) == doctest::Approx(0.37));
    CHECK_THROWS_AS(shifted_geomean({}), std::invalid_argument);
    CHECK_THROWS_AS(shifted_geomean({-1.0}), std::invalid_argument);
}

TEST_CASE("benchmark runs heuristics against the exact reference") {
    Rng rng(4242);
    std::vector<Instance> instances;
    for (int i = 0; i < 10; ++i) instances.push_back(random_instance(rng, 3, 2, 3));

    std::vector<NamedMethod> methods;
    for (const RulePair& rules : all_rule_pairs())
        methods.push_back({to_string(rules), [rules](const Instance& inst) { return dispatch(inst, rules); }});

    BenchOptions opts;
    opts.workers = 2;
    GapReport report = run_benchmark(instances, methods, {}, opts);
    REQUIRE(report.methods.size() == 8);
    for (const auto& row : report.methods) {
        CHECK(row.feasibility_rate == doctest::Approx(1.0));
        CHECK(row.failures == 0);
        for (double g : row.gaps) {
            REQUIRE(!std::isnan(g));
            CHECK(g >= -1e-12); // references are proven optimal here
        }
        CHECK(row.gap_geomean >= -1e-12);
    }

    // Gaps are timing-independent: a rerun reproduces them exactly.
    GapReport again = run_benchmark(instances, methods, {}, opts);
    for (std::size_t k = 0; k < report.methods.size(); ++k)
        CHECK(report.methods[k].gaps == again.methods[k].gaps);
}

TEST_CASE("provided references short-circuit the reference solve") {
    Instance inst = make_instance(1, {{{{0, 4}}}});
    std::vector<NamedMethod> methods{{"noop", [](const Instance& i) {
        Solution s;
        s.assignment = Assignment{{0}};
        s.schedule = make_schedule(i, s.assignment, {0});
        s.status = SolveStatus::FeasibleTimeLimit;
        return s;
    }}};
    GapReport report = run_benchmark({inst}, methods, {Time{4}}, BenchOptions{});
    CHECK(report.reference_makespans == std::vector<Time>{4});
    CHECK(report.methods[0].gaps[0] == doctest::Approx(0.0));
}

TEST_CASE("method failures are recorded per cell") {
    Instance inst = make_instance(1, {{{{0, 4}}}});
    std::vector<NamedMethod> methods{{"boom", [](const Instance&) -> Solution {
        throw std::runtime_error("no");
    }}};
    GapReport report = run_benchmark({inst}, methods, {Time{4}}, BenchOptions{});
    CHECK(report.methods[0].failures == 1);
    CHECK(std::isnan(report.methods[0].gaps[0]));
    CHECK(!render_table(report).empty());
    CHECK(report_json(report).find("boom") != std::string::npos);
}
