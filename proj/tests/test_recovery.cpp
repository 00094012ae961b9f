#include <doctest.h>

#include "fjsp/recovery.hpp"
#include "fjsp/solver.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

TEST_CASE("derive_ordering sorts by predicted start with index tie-break") {
    Instance inst = make_instance(2, {{{{0, 2}}}, {{{0, 3}}, {{1, 1}}}});
    Assignment a{{0, 0, 1}};
    SUBCASE("ascending predictions") {
        MachineOrdering ord = derive_ordering(inst, a, {3.9, 0.2, 1.0});
        CHECK(ord.order[0] == std::vector<int>{1, 0});
        CHECK(ord.order[1] == std::vector<int>{2});
    }
    SUBCASE("equal predictions fall back to job order") {
        MachineOrdering ord = derive_ordering(inst, a, {1.5, 1.5, 0.0});
        CHECK(ord.order[0] == std::vector<int>{0, 1});
    }
}

TEST_CASE("recover schedules a lone chain by longest path") {
    Instance inst = make_instance(1, {{{{0, 2}}, {{0, 3}}}});
    Assignment a{{0, 0}};
    Schedule s = recover_from_predictions(inst, a, {0.1, 0.7});
    CHECK(s.start == std::vector<Time>{0, 2});
    CHECK(s.makespan == 5);
}

TEST_CASE("recover reproduces an optimal schedule fed back in") {
    Rng rng(99);
    for (int round = 0; round < 30; ++round) {
        Instance inst = random_instance(rng, 3, 2, 3);
        Solution sol = solve_fjsp(inst, SolveOptions{});
        REQUIRE(sol.status == SolveStatus::Optimal);
        std::vector<double> predicted(sol.schedule.start.begin(), sol.schedule.start.end());
        Schedule recovered = recover_from_predictions(inst, sol.assignment, predicted);
        CHECK(recovered.makespan == sol.schedule.makespan);
        CHECK(check_feasibility(inst, sol.assignment, recovered).total == 0);
    }
}

TEST_CASE("cycle between prediction and job order falls back to greedy") {
    Instance inst = make_instance(1, {{{{0, 2}}, {{0, 2}}}});
    Assignment a{{0, 0}};
    // predictions reverse the job chain on the shared machine
    Schedule s = recover_from_predictions(inst, a, {5.0, 0.0});
    CHECK(s.start == std::vector<Time>{0, 2});
    CHECK(check_feasibility(inst, a, s).total == 0);
}

TEST_CASE("recover output is always feasible and idempotent") {
    Rng rng(777);
    for (int round = 0; round < 100; ++round) {
        Instance inst = random_instance(rng, 3, 3, 3);
        Assignment a = random_assignment(rng, inst);
        std::vector<double> predicted(static_cast<std::size_t>(inst.total_tasks()));
        for (auto& p : predicted) p = rng.uniform01() * 40.0 - 5.0;

        Schedule first = recover_from_predictions(inst, a, predicted);
        CHECK(check_feasibility(inst, a, first).total == 0);

        std::vector<double> again(first.start.begin(), first.start.end());
        Schedule second = recover_from_predictions(inst, a, again);
        CHECK(second == first);
    }
}

TEST_CASE("recovered makespan is bounded below by the induced JSP optimum") {
    Rng rng(1234);
    for (int round = 0; round < 25; ++round) {
        Instance inst = random_instance(rng, 2, 2, 2);
        Assignment a = random_assignment(rng, inst);
        std::vector<double> predicted(static_cast<std::size_t>(inst.total_tasks()));
        for (auto& p : predicted) p = rng.uniform01() * 20.0;
        Schedule recovered = recover_from_predictions(inst, a, predicted);
        CHECK(recovered.makespan >= oracle_jsp_optimum(induce_jsp(inst, a)));
    }
}

TEST_CASE("longest-path starts equal the LP-style relaxation fixpoint") {
    Rng rng(31415);
    for (int round = 0; round < 40; ++round) {
        Instance inst = random_instance(rng, 3, 2, 3);
        Assignment a = random_assignment(rng, inst);
        std::vector<double> predicted(static_cast<std::size_t>(inst.total_tasks()));
        for (auto& p : predicted) p = rng.uniform01() * 25.0;
        MachineOrdering ord = derive_ordering(inst, a, predicted);

        JspView view = induce_jsp(inst, a);
        auto relaxed = relaxation_earliest_starts(view, ord.order);
        if (!relaxed) continue; // cyclic ordering goes down the greedy path instead
        Schedule recovered = recover(inst, a, ord, predicted);
        CHECK(recovered.start == *relaxed);
    }
}
