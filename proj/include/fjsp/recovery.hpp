#ifndef FJSP_RECOVERY_HPP
#define FJSP_RECOVERY_HPP

#include <vector>

#include "fjsp/core.hpp"

namespace fjsp {

// Per machine, a total order over the tasks assigned to it (flat task ids).
struct MachineOrdering {
    std::vector<std::vector<int>> order;

    bool operator==(const MachineOrdering&) const = default;
};

// Predicted start times imply an ordering: per-machine tasks sorted ascending
// by predicted start, ties by flat task id (job then task).
MachineOrdering derive_ordering(const Instance& inst, const Assignment& a,
                                const std::vector<double>& predicted_starts);

// Feasibility restoration under a fixed assignment. When the union of job
// precedence and machine-order edges is acyclic, each start is the longest
// path from the sources, which attains the optimum of the ordering-fixed LP.
// Otherwise a serial fallback dispatches ready tasks in ascending predicted
// start. The result is always feasible.
Schedule recover(const Instance& inst, const Assignment& a, const MachineOrdering& ordering,
                 const std::vector<double>& predicted_starts);

// Ordering + recovery in one step.
Schedule recover_from_predictions(const Instance& inst, const Assignment& a,
                                  const std::vector<double>& predicted_starts);

} // namespace fjsp

#endif // FJSP_RECOVERY_HPP
