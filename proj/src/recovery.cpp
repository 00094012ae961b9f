#include "fjsp/recovery.hpp"

#include <algorithm>
#include <stdexcept>

#include "fjsp/dag.hpp"

namespace fjsp {

MachineOrdering derive_ordering(const Instance& inst, const Assignment& a,
                                const std::vector<double>& predicted_starts) {
    if (auto err = check_assignment(inst, a)) throw std::invalid_argument(*err);
    if (static_cast<int>(predicted_starts.size()) != inst.total_tasks())
        throw std::invalid_argument("predicted start vector has wrong size");

    MachineOrdering ordering;
    ordering.order.resize(inst.num_machines());
    for (int i = 0; i < inst.total_tasks(); ++i) ordering.order[a.machine_of[i]].push_back(i);
    for (auto& tasks : ordering.order)
        std::stable_sort(tasks.begin(), tasks.end(), [&](int x, int y) {
            if (predicted_starts[x] != predicted_starts[y]) return predicted_starts[x] < predicted_starts[y];
            return x < y;
        });
    return ordering;
}

Schedule recover(const Instance& inst, const Assignment& a, const MachineOrdering& ordering,
                 const std::vector<double>& predicted_starts) {
    JspView view = induce_jsp(inst, a);
    if (auto starts = earliest_starts(view, ordering.order))
        return make_schedule(inst, a, std::move(*starts));

    // The implied ordering contradicts job precedence; fall back to serial
    // generation, dispatching the ready task with the smallest prediction.
    const int n = inst.total_tasks();
    std::vector<int> next_task(inst.num_jobs(), 0);
    std::vector<Time> job_ready(inst.num_jobs(), 0);
    std::vector<Time> machine_end(inst.num_machines(), 0);
    std::vector<Time> starts(n, 0);

    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int j = 0; j < inst.num_jobs(); ++j) {
            if (next_task[j] >= inst.num_tasks(j)) continue;
            int i = inst.task_id(j, next_task[j]);
            if (pick == -1 || predicted_starts[i] < predicted_starts[pick] ||
                (predicted_starts[i] == predicted_starts[pick] && i < pick))
                pick = i;
        }
        auto [j, t] = inst.job_task(pick);
        int m = a.machine_of[pick];
        Time start = std::max(job_ready[j], machine_end[m]);
        starts[pick] = start;
        Time end = start + view.duration_of[pick];
        job_ready[j] = end;
        machine_end[m] = end;
        ++next_task[j];
    }
    return make_schedule(inst, a, std::move(starts));
}

Schedule recover_from_predictions(const Instance& inst, const Assignment& a,
                                  const std::vector<double>& predicted_starts) {
    return recover(inst, a, derive_ordering(inst, a, predicted_starts), predicted_starts);
}

} // namespace fjsp
