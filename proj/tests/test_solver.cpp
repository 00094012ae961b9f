#include <doctest.h>

#include "fjsp/solver.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

namespace {

SolveOptions quick() {
    SolveOptions opts;
    opts.time_limit_seconds = 30.0;
    return opts;
}

JspView random_jsp(Rng& rng, int jobs, int tasks, int machines) {
    JspView view;
    view.num_machines = machines;
    view.tasks_per_job.assign(static_cast<std::size_t>(jobs), tasks);
    for (int i = 0; i < jobs * tasks; ++i) {
        view.machine_of.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(machines))));
        view.duration_of.push_back(rng.range(1, 9));
    }
    return view;
}

} // namespace

TEST_CASE("solve_fjsp trivial instances") {
    SUBCASE("one task") {
        Instance inst = make_instance(1, {{{{0, 5}}}});
        Solution sol = solve_fjsp(inst, quick());
        CHECK(sol.status == SolveStatus::Optimal);
        CHECK(sol.schedule.makespan == 5);
    }
    SUBCASE("two jobs share the only machine") {
        Instance inst = make_instance(1, {{{{0, 3}}}, {{{0, 4}}}});
        Solution sol = solve_fjsp(inst, quick());
        CHECK(sol.status == SolveStatus::Optimal);
        CHECK(sol.schedule.makespan == 7);
    }
    SUBCASE("parallel machines halve the load") {
        Instance inst = make_instance(2, {{{{0, 3}, {1, 3}}}, {{{0, 3}, {1, 3}}}});
        Solution sol = solve_fjsp(inst, quick());
        CHECK(sol.schedule.makespan == 3);
    }
}

TEST_CASE("solve_fjsp output is always feasible") {
    Rng rng(501);
    for (int round = 0; round < 40; ++round) {
        Instance inst = random_instance(rng, 3, 3, 3);
        Solution sol = solve_fjsp(inst, quick());
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(check_feasibility(inst, sol.assignment, sol.schedule).total == 0);
        CHECK(makespan(inst, sol.assignment, sol.schedule) == sol.schedule.makespan);
    }
}

TEST_CASE("brute force agrees with the independent relaxation oracle") {
    Rng rng(902);
    for (int round = 0; round < 25; ++round) {
        Instance inst = random_instance(rng, 2, 2, 3);
        Solution bf = brute_force_fjsp(inst);
        CHECK(bf.schedule.makespan == oracle_fjsp_optimum(inst));
        CHECK(check_feasibility(inst, bf.assignment, bf.schedule).total == 0);
    }
}

TEST_CASE("solve_fjsp matches brute force on 50 seeded instances") {
    Rng rng(7);
    for (int round = 0; round < 50; ++round) {
        Instance inst = random_instance(rng, 3, 2, 3);
        Solution exact = solve_fjsp(inst, quick());
        Solution oracle = brute_force_fjsp(inst);
        REQUIRE(exact.status == SolveStatus::Optimal);
        CHECK(exact.schedule.makespan == oracle.schedule.makespan);
    }
}

TEST_CASE("brute force size guard") {
    JobSpec nine_tasks(9, Opts{{0, 1}});
    Instance big = make_instance(1, {nine_tasks});
    CHECK(big.total_tasks() == 9);
    CHECK_THROWS_AS(brute_force_fjsp(big), std::invalid_argument);
}

TEST_CASE("single-machine optimum is at least the critical chain") {
    Rng rng(33);
    for (int round = 0; round < 10; ++round) {
        Instance inst = random_instance(rng, 2, 2, 1);
        Solution bf = brute_force_fjsp(inst);
        Time chain = 0;
        for (int j = 0; j < inst.num_jobs(); ++j) {
            Time sum = 0;
            for (int t = 0; t < inst.num_tasks(j); ++t) sum += inst.options(j, t)[0].duration;
            chain = std::max(chain, sum);
        }
        CHECK(bf.schedule.makespan >= chain);
    }
}

TEST_CASE("solve_jsp schedules a chain back to back") {
    Instance inst = make_instance(1, {{{{0, 2}}, {{0, 3}}}});
    JspView view = induce_jsp(inst, Assignment{{0, 0}});
    Solution sol = solve_jsp(view, quick());
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.schedule.start == std::vector<Time>{0, 2});
    CHECK(sol.schedule.makespan == 5);
}

TEST_CASE("solve_jsp matches the permutation oracle on random 3x3 JSPs") {
    Rng rng(11);
    for (int round = 0; round < 20; ++round) {
        JspView view = random_jsp(rng, 3, 3, 3);
        Solution sol = solve_jsp(view, quick());
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.schedule.makespan == oracle_jsp_optimum(view));
    }
}

TEST_CASE("solve_jsp with goal keeps an optimal reference") {
    Instance inst = make_instance(1, {{{{0, 3}}}, {{{0, 3}}}});
    JspView view = induce_jsp(inst, Assignment{{0, 0}});
    SymmetryBreakGoal goal;
    goal.reference_assignment = Assignment{{0, 0}};
    goal.reference_starts = std::vector<Time>{3, 0};
    goal.target_makespan = 6;
    Solution sol = solve_jsp(view, quick(), goal);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.schedule.start == std::vector<Time>{3, 0});
    CHECK(sol.schedule.makespan == 6);
}

TEST_CASE("solve_jsp with goal matches the grid-enumeration oracle") {
    Rng rng(5150);
    int checked = 0;
    while (checked < 12) {
        Instance inst = random_instance(rng, 2, 2, 2, 4);
        if (inst.total_tasks() > 4) continue;
        Assignment a = random_assignment(rng, inst);
        JspView view = induce_jsp(inst, a);

        Solution plain = solve_jsp(view, quick());
        REQUIRE(plain.status == SolveStatus::Optimal);
        const Time cap = plain.schedule.makespan + rng.range(0, 3);
        if (cap > 12) continue;

        std::vector<Time> ref(static_cast<std::size_t>(inst.total_tasks()));
        for (auto& r : ref) r = rng.range(0, cap);

        SymmetryBreakGoal goal{a, ref, cap};
        Solution sb = solve_jsp(view, quick(), goal);
        REQUIRE(sb.status == SolveStatus::Optimal);
        CHECK(check_feasibility(inst, a, sb.schedule).total == 0);
        CHECK(makespan(inst, a, sb.schedule) <= cap);

        Time got = 0;
        for (int i = 0; i < inst.total_tasks(); ++i)
            got += std::abs(sb.schedule.start[static_cast<std::size_t>(i)] -
                            ref[static_cast<std::size_t>(i)]);
        auto expected = oracle_l1_closest(inst, a, ref, cap);
        REQUIRE(expected.has_value());
        CHECK(got == *expected);
        ++checked;
    }
}

TEST_CASE("symmetry breaking keeps the reference when it is co-optimal") {
    Instance inst = make_instance(2, {{{{0, 5}, {1, 5}}}});
    SymmetryBreakGoal goal{Assignment{{1}}, std::nullopt, 5};
    Solution sol = solve_symmetry_breaking(inst, goal, quick());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.assignment.machine_of == std::vector<int>{1});
    CHECK(assignment_hamming(sol.assignment, goal.reference_assignment) == 0);
    CHECK(sol.schedule.makespan == 5);
}

TEST_CASE("symmetry breaking counts both one-hot entries of a forced move") {
    // The reference machine is not compatible, so the task must move: the
    // one-hot rows differ in two entries.
    Instance inst = make_instance(2, {{{{0, 5}}}});
    SymmetryBreakGoal goal{Assignment{{1}}, std::nullopt, 5};
    Solution sol = solve_symmetry_breaking(inst, goal, quick());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.assignment.machine_of == std::vector<int>{0});
    CHECK(assignment_hamming(sol.assignment, goal.reference_assignment) == 2);
}

TEST_CASE("symmetry breaking moves one task when the cap forces parallelism") {
    Instance inst = make_instance(2, {{{{0, 3}, {1, 3}}}, {{{0, 3}, {1, 3}}}});
    SymmetryBreakGoal goal{Assignment{{0, 0}}, std::nullopt, 3};
    Solution sol = solve_symmetry_breaking(inst, goal, quick());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.schedule.makespan == 3);
    CHECK(assignment_hamming(sol.assignment, goal.reference_assignment) == 2);
}

TEST_CASE("symmetry breaking reports an unattainable target") {
    Instance inst = make_instance(1, {{{{0, 5}}}});
    SymmetryBreakGoal goal{Assignment{{0}}, std::nullopt, 4};
    Solution sol = solve_symmetry_breaking(inst, goal, quick());
    CHECK(sol.status == SolveStatus::Unsolved);
}

TEST_CASE("symmetry breaking distance is exhaustively minimal") {
    Rng rng(31337);
    for (int round = 0; round < 25; ++round) {
        Instance inst = random_instance(rng, 3, 2, 3);
        Solution exact = solve_fjsp(inst, quick());
        REQUIRE(exact.status == SolveStatus::Optimal);
        Assignment reference = random_assignment(rng, inst);

        SymmetryBreakGoal goal{reference, std::nullopt, exact.schedule.makespan};
        Solution sb = solve_symmetry_breaking(inst, goal, quick());
        REQUIRE(sb.status == SolveStatus::Optimal);
        CHECK(sb.schedule.makespan == exact.schedule.makespan);
        CHECK(check_feasibility(inst, sb.assignment, sb.schedule).total == 0);
        CHECK(assignment_hamming(sb.assignment, reference) ==
              oracle_sb_min_distance(inst, reference, exact.schedule.makespan));
    }
}

TEST_CASE("optimal makespan is monotone in durations") {
    Rng rng(640);
    for (int round = 0; round < 15; ++round) {
        Instance inst = random_instance(rng, 2, 2, 2);
        Time before = brute_force_fjsp(inst).schedule.makespan;

        // bump one random option
        std::vector<JobSpec> jobs;
        for (int j = 0; j < inst.num_jobs(); ++j) {
            JobSpec spec;
            for (int t = 0; t < inst.num_tasks(j); ++t) spec.push_back(inst.options(j, t));
            jobs.push_back(std::move(spec));
        }
        int tj = static_cast<int>(rng.below(static_cast<std::uint64_t>(jobs.size())));
        int tt = static_cast<int>(rng.below(jobs[static_cast<std::size_t>(tj)].size()));
        int to = static_cast<int>(rng.below(jobs[static_cast<std::size_t>(tj)][static_cast<std::size_t>(tt)].size()));
        jobs[static_cast<std::size_t>(tj)][static_cast<std::size_t>(tt)][static_cast<std::size_t>(to)].duration +=
            rng.range(1, 4);
        Instance bumped = make_instance(inst.num_machines(), jobs);
        CHECK(brute_force_fjsp(bumped).schedule.makespan >= before);
    }
}

TEST_CASE("identical inputs produce identical solutions") {
    Rng rng(8080);
    Instance inst = random_instance(rng, 3, 3, 3);
    Solution a = solve_fjsp(inst, quick());
    Solution b = solve_fjsp(inst, quick());
    CHECK(a.assignment == b.assignment);
    CHECK(a.schedule == b.schedule);
    CHECK(a.status == b.status);
}

TEST_CASE("zero time budget yields Unsolved") {
    Instance inst = make_instance(1, {{{{0, 5}}}});
    SolveOptions opts;
    opts.time_limit_seconds = 0.0;
    Solution sol = solve_fjsp(inst, opts);
    CHECK(sol.status == SolveStatus::Unsolved);
}
