#ifndef FJSP_SOLVER_HPP
#define FJSP_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fjsp/core.hpp"

namespace fjsp {

enum class SolveMode { Makespan, SymmetryBreak };

struct SolveOptions {
    double time_limit_seconds = 10.0;
    std::uint64_t seed = 0; // 0 keeps the fixed tie order; nonzero shuffles ties
    SolveMode mode = SolveMode::Makespan;
};

struct SymmetryBreakGoal {
    Assignment reference_assignment;
    std::optional<std::vector<Time>> reference_starts; // flat task ids
    Time target_makespan = 0;
};

// Depth-first branch and bound: machine choices first, then active-schedule
// sequencing, pruned by the larger of the per-machine committed-load bound
// and the per-job remaining critical-path bound.
Solution solve_fjsp(const Instance& inst, const SolveOptions& opts);

// Without a goal: minimal-makespan JSP solve. With a goal: minimizes the L1
// distance of the start vector to goal.reference_starts subject to
// makespan <= goal.target_makespan.
Solution solve_jsp(const JspView& view, const SolveOptions& opts,
                   const std::optional<SymmetryBreakGoal>& goal = std::nullopt);

// Minimizes the Hamming distance of the one-hot assignment matrix to
// goal.reference_assignment among all assignments that still admit a schedule
// with makespan <= goal.target_makespan (which must be the proven optimum, so
// the returned makespan equals it exactly). Returns Unsolved if the target is
// unattainable.
Solution solve_symmetry_breaking(const Instance& inst, const SymmetryBreakGoal& goal,
                                 const SolveOptions& opts);

// Exhaustive oracle: every compatible assignment crossed with every
// per-machine task permutation, each scheduled by longest path. Guarded to
// instances with at most 8 tasks; throws std::invalid_argument beyond that.
Solution brute_force_fjsp(const Instance& inst);

// Sum over the one-hot assignment matrices of |z - z_ref|: twice the number
// of tasks assigned to different machines.
Time assignment_hamming(const Assignment& a, const Assignment& b);

} // namespace fjsp

#endif // FJSP_SOLVER_HPP
