#include "fjsp/dag.hpp"

#include <algorithm>

namespace fjsp {

std::optional<std::vector<Time>> earliest_starts(const JspView& view,
                                                 const std::vector<std::vector<int>>& machine_order) {
    const int n = view.total_tasks();
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indegree(n, 0);

    int id = 0;
    for (int j = 0; j < view.num_jobs(); ++j) {
        for (int t = 0; t + 1 < view.tasks_per_job[j]; ++t) {
            succ[id + t].push_back(id + t + 1);
            ++indegree[id + t + 1];
        }
        id += view.tasks_per_job[j];
    }
    for (const auto& order : machine_order)
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            succ[order[k]].push_back(order[k + 1]);
            ++indegree[order[k + 1]];
        }

    std::vector<int> queue;
    queue.reserve(n);
    for (int i = 0; i < n; ++i)
        if (indegree[i] == 0) queue.push_back(i);

    std::vector<Time> start(n, 0);
    std::size_t head = 0;
    while (head < queue.size()) {
        int u = queue[head++];
        Time end = start[u] + view.duration_of[u];
        for (int v : succ[u]) {
            start[v] = std::max(start[v], end);
            if (--indegree[v] == 0) queue.push_back(v);
        }
    }
    if (static_cast<int>(queue.size()) != n) return std::nullopt; // cycle
    return start;
}

} // namespace fjsp
