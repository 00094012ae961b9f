#include <doctest.h>

#include "fjsp/core.hpp"
#include "fjsp/rng.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

TEST_CASE("validate_instance accepts a minimal valid instance") {
    Instance inst = make_instance(1, {{{{0, 5}}}});
    CHECK(validate_instance(inst).empty());
    CHECK(inst.total_tasks() == 1);
    CHECK(inst.max_duration() == 5);
}

TEST_CASE("validate_instance flags an empty compatible set") {
    Instance inst = make_instance(1, {{{}}});
    auto errors = validate_instance(inst);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].find("(0,0)") != std::string::npos);
    CHECK(errors[0].find("no compatible machine") != std::string::npos);
}

TEST_CASE("validate_instance flags a non-positive duration") {
    Instance inst = make_instance(1, {{{{0, 0}}}});
    auto errors = validate_instance(inst);
    REQUIRE(!errors.empty());
    CHECK(errors[0].find("non-positive duration") != std::string::npos);
}

TEST_CASE("validate_instance flags out-of-range machine ids") {
    Instance inst = make_instance(2, {{{{5, 3}}}});
    auto errors = validate_instance(inst);
    REQUIRE(!errors.empty());
    CHECK(errors[0].find("out of range") != std::string::npos);
}

TEST_CASE("check_feasibility on a back-to-back chain") {
    Instance inst = make_instance(1, {{{{0, 2}}, {{0, 3}}}});
    Assignment a{{0, 0}};
    SUBCASE("feasible starts") {
        Schedule s{{0, 2}, 5};
        auto report = check_feasibility(inst, a, s);
        CHECK(report.total == 0);
        CHECK(report.feasible());
    }
    SUBCASE("precedence violated by one unit") {
        Schedule s{{0, 1}, 4};
        auto report = check_feasibility(inst, a, s);
        REQUIRE(report.job_precedence.size() == 1);
        CHECK(report.job_precedence[0].magnitude == 1);
        CHECK(report.total == 1);
    }
}

TEST_CASE("check_feasibility reports the smaller one-sided overlap") {
    Instance inst = make_instance(1, {{{{0, 4}}}, {{{0, 4}}}});
    Assignment a{{0, 0}};
    Schedule s{{0, 2}, 6};
    auto report = check_feasibility(inst, a, s);
    REQUIRE(report.machine_overlap.size() == 1);
    CHECK(report.machine_overlap[0].magnitude == 2);
    CHECK(report.total == 2);
}

TEST_CASE("check_feasibility rejects incompatible assignments") {
    Instance inst = make_instance(2, {{{{0, 5}}}});
    Assignment a{{1}};
    Schedule s{{0}, 5};
    CHECK_THROWS_AS(check_feasibility(inst, a, s), std::invalid_argument);
}

TEST_CASE("makespan of basic shapes") {
    SUBCASE("single task") {
        Instance inst = make_instance(1, {{{{0, 5}}}});
        CHECK(makespan(inst, Assignment{{0}}, Schedule{{0}, 0}) == 5);
    }
    SUBCASE("two jobs on one machine") {
        Instance inst = make_instance(1, {{{{0, 3}}}, {{{0, 4}}}});
        CHECK(makespan(inst, Assignment{{0, 0}}, Schedule{{0, 3}, 0}) == 7);
    }
    SUBCASE("two jobs in parallel") {
        Instance inst = make_instance(2, {{{{0, 3}}}, {{{1, 3}}}});
        CHECK(makespan(inst, Assignment{{0, 1}}, Schedule{{0, 0}, 0}) == 3);
    }
}

TEST_CASE("induce_jsp copies assigned durations") {
    Instance inst = make_instance(2, {{{{0, 3}, {1, 7}}, {{1, 4}}}});
    JspView view = induce_jsp(inst, Assignment{{1, 1}});
    CHECK(view.duration_of == std::vector<Time>{7, 4});
    CHECK(view.machine_of == std::vector<int>{1, 1});
}

TEST_CASE("makespan is invariant under consistent job permutation") {
    Rng rng(2024);
    for (int round = 0; round < 30; ++round) {
        Instance inst = random_instance(rng, 3, 3, 3);
        Assignment a = random_assignment(rng, inst);
        std::vector<Time> starts(static_cast<std::size_t>(inst.total_tasks()));
        for (auto& s : starts) s = rng.range(0, 30);
        Time before = makespan(inst, a, Schedule{starts, 0});

        std::vector<int> perm(static_cast<std::size_t>(inst.num_jobs()));
        for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = static_cast<int>(j);
        rng.shuffle(perm);

        std::vector<JobSpec> jobs(static_cast<std::size_t>(inst.num_jobs()));
        Assignment pa;
        std::vector<Time> pstarts;
        for (int pj = 0; pj < inst.num_jobs(); ++pj) {
            int j = perm[static_cast<std::size_t>(pj)];
            JobSpec spec;
            for (int t = 0; t < inst.num_tasks(j); ++t) spec.push_back(inst.options(j, t));
            jobs[static_cast<std::size_t>(pj)] = std::move(spec);
        }
        Instance permuted = make_instance(inst.num_machines(), jobs);
        for (int pj = 0; pj < inst.num_jobs(); ++pj) {
            int j = perm[static_cast<std::size_t>(pj)];
            for (int t = 0; t < inst.num_tasks(j); ++t) {
                pa.machine_of.push_back(a.machine_of[static_cast<std::size_t>(inst.task_id(j, t))]);
                pstarts.push_back(starts[static_cast<std::size_t>(inst.task_id(j, t))]);
            }
        }
        CHECK(makespan(permuted, pa, Schedule{pstarts, 0}) == before);
    }
}

TEST_CASE("flat task ids are job-major") {
    Instance inst = make_instance(1, {{{{0, 1}}, {{0, 1}}}, {{{0, 1}}}});
    CHECK(inst.task_id(0, 1) == 1);
    CHECK(inst.task_id(1, 0) == 2);
    CHECK(inst.job_task(2) == std::pair<int, int>{1, 0});
}
