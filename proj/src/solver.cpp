#include "fjsp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "fjsp/dag.hpp"
#include "fjsp/rng.hpp"

namespace fjsp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr Time kInf = std::numeric_limits<Time>::max() / 4;

struct Deadline {
    Clock::time_point at;

    static Deadline in(double seconds) {
        return {Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(seconds))};
    }
    bool expired() const { return Clock::now() >= at; }
};

Time view_makespan(const JspView& view, const std::vector<Time>& starts) {
    Time result = 0;
    int id = 0;
    for (int j = 0; j < view.num_jobs(); ++j) {
        id += view.tasks_per_job[j];
        result = std::max(result, starts[id - 1] + view.duration_of[id - 1]);
    }
    return result;
}

// ----------------------------------------------------------------------------
// Active-schedule JSP search with Giffler-Thompson conflict-set branching.
// Every node picks the machine owning the globally earliest possible
// completion and branches on the ready tasks that could start before it.
// ----------------------------------------------------------------------------
class JspSearch {
public:
    struct Result {
        std::optional<std::vector<Time>> starts;
        Time makespan = kInf;
        bool timed_out = false;
    };

    JspSearch(const JspView& view, Deadline deadline, std::uint64_t seed)
        : view_(view), deadline_(deadline), seed_(seed) {
        const int jobs = view.num_jobs();
        job_of_.resize(view.total_tasks());
        int id = 0;
        for (int j = 0; j < jobs; ++j)
            for (int t = 0; t < view.tasks_per_job[j]; ++t) job_of_[id++] = j;
        first_task_.resize(jobs);
        int offset = 0;
        for (int j = 0; j < jobs; ++j) {
            first_task_[j] = offset;
            offset += view.tasks_per_job[j];
        }
    }

    // Prunes nodes whose bound reaches ub_init; if stop_below is set, returns
    // as soon as an incumbent with makespan <= *stop_below exists.
    Result run(Time ub_init, std::optional<Time> stop_below) {
        ub_ = ub_init;
        stop_below_ = stop_below;
        next_task_.assign(view_.num_jobs(), 0);
        job_ready_.assign(view_.num_jobs(), 0);
        machine_avail_.assign(view_.num_machines, 0);
        machine_remaining_.assign(view_.num_machines, 0);
        starts_.assign(view_.total_tasks(), 0);
        for (int i = 0; i < view_.total_tasks(); ++i)
            machine_remaining_[view_.machine_of[i]] += view_.duration_of[i];
        scheduled_ = 0;
        max_completion_ = 0;
        stop_ = false;
        nodes_ = 0;
        result_ = Result{};
        dfs();
        return result_;
    }

private:
    Time lower_bound() const {
        Time lb = max_completion_;
        std::vector<Time> head(view_.num_machines, kInf);
        for (int j = 0; j < view_.num_jobs(); ++j) {
            Time cursor = job_ready_[j];
            for (int t = next_task_[j]; t < view_.tasks_per_job[j]; ++t) {
                int i = first_task_[j] + t;
                head[view_.machine_of[i]] = std::min(head[view_.machine_of[i]], cursor);
                cursor += view_.duration_of[i];
            }
            lb = std::max(lb, cursor); // job critical-path bound
        }
        for (int m = 0; m < view_.num_machines; ++m)
            if (machine_remaining_[m] > 0)
                lb = std::max(lb, std::max(machine_avail_[m], head[m]) + machine_remaining_[m]);
        return lb;
    }

    void dfs() {
        if (stop_) return;
        if (deadline_.expired()) {
            result_.timed_out = true;
            stop_ = true;
            return;
        }
        ++nodes_;
        if (scheduled_ == view_.total_tasks()) {
            if (max_completion_ < ub_) {
                ub_ = max_completion_;
                result_.starts = starts_;
                result_.makespan = max_completion_;
                if (stop_below_ && ub_ <= *stop_below_) stop_ = true;
            }
            return;
        }
        if (lower_bound() >= ub_) return;

        // Earliest completion over ready tasks decides the branching machine.
        Time best_completion = kInf;
        int best_machine = -1;
        for (int j = 0; j < view_.num_jobs(); ++j) {
            if (next_task_[j] >= view_.tasks_per_job[j]) continue;
            int i = first_task_[j] + next_task_[j];
            Time e = std::max(job_ready_[j], machine_avail_[view_.machine_of[i]]);
            Time c = e + view_.duration_of[i];
            if (c < best_completion) {
                best_completion = c;
                best_machine = view_.machine_of[i];
            }
        }

        std::vector<int> conflict; // ready tasks on best_machine startable before best_completion
        for (int j = 0; j < view_.num_jobs(); ++j) {
            if (next_task_[j] >= view_.tasks_per_job[j]) continue;
            int i = first_task_[j] + next_task_[j];
            if (view_.machine_of[i] != best_machine) continue;
            Time e = std::max(job_ready_[j], machine_avail_[best_machine]);
            if (e < best_completion) conflict.push_back(i);
        }
        if (seed_ != 0 && conflict.size() > 1) {
            Rng rng(seed_ ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(nodes_)));
            rng.shuffle(conflict);
        }

        for (int i : conflict) {
            int j = job_of_[i];
            Time e = std::max(job_ready_[j], machine_avail_[best_machine]);
            Time end = e + view_.duration_of[i];

            Time saved_job_ready = job_ready_[j];
            Time saved_machine_avail = machine_avail_[best_machine];
            Time saved_max = max_completion_;

            starts_[i] = e;
            job_ready_[j] = end;
            machine_avail_[best_machine] = end;
            machine_remaining_[best_machine] -= view_.duration_of[i];
            ++next_task_[j];
            ++scheduled_;
            max_completion_ = std::max(max_completion_, end);

            dfs();

            --scheduled_;
            --next_task_[j];
            machine_remaining_[best_machine] += view_.duration_of[i];
            machine_avail_[best_machine] = saved_machine_avail;
            job_ready_[j] = saved_job_ready;
            max_completion_ = saved_max;
            if (stop_) return;
        }
    }

    const JspView& view_;
    Deadline deadline_;
    std::uint64_t seed_;
    std::vector<int> job_of_;
    std::vector<int> first_task_;

    Time ub_ = kInf;
    std::optional<Time> stop_below_;
    std::vector<int> next_task_;
    std::vector<Time> job_ready_;
    std::vector<Time> machine_avail_;
    std::vector<Time> machine_remaining_;
    std::vector<Time> starts_;
    int scheduled_ = 0;
    Time max_completion_ = 0;
    bool stop_ = false;
    std::uint64_t nodes_ = 0;
    Result result_;
};

// ----------------------------------------------------------------------------
// Assignment-level DFS shared by the makespan and symmetry-breaking solves.
// Tasks are assigned in flat (job-major) order; machine options ascending,
// optionally rotated so a reference machine is tried first.
// ----------------------------------------------------------------------------
struct AssignmentBounds {
    explicit AssignmentBounds(const Instance& inst) : inst(inst) {
        loads.assign(inst.num_machines(), 0);
        chain.assign(inst.num_jobs(), 0);
        min_duration.resize(inst.total_tasks());
        for (int id = 0; id < inst.total_tasks(); ++id) {
            Time lo = kInf;
            for (const auto& opt : inst.options_flat(id)) lo = std::min(lo, opt.duration);
            min_duration[id] = lo;
            chain[inst.job_task(id).first] += lo;
        }
    }

    void apply(int id, Time duration, int machine) {
        loads[machine] += duration;
        chain[inst.job_task(id).first] += duration - min_duration[id];
    }
    void undo(int id, Time duration, int machine) {
        loads[machine] -= duration;
        chain[inst.job_task(id).first] -= duration - min_duration[id];
    }

    // max(per-machine committed load, per-job critical chain); valid for any
    // completion of the partial assignment.
    Time value() const {
        Time lb = 0;
        for (Time l : loads) lb = std::max(lb, l);
        for (Time c : chain) lb = std::max(lb, c);
        return lb;
    }

    const Instance& inst;
    std::vector<Time> loads;
    std::vector<Time> chain;
    std::vector<Time> min_duration;
};

class FjspSearch {
public:
    FjspSearch(const Instance& inst, Deadline deadline, std::uint64_t seed)
        : inst_(inst), deadline_(deadline), seed_(seed), bounds_(inst) {}

    Solution run() {
        assignment_.machine_of.assign(inst_.total_tasks(), -1);
        dfs(0);
        Solution sol;
        if (best_starts_) {
            sol.assignment = best_assignment_;
            sol.schedule = Schedule{*best_starts_, ub_};
            sol.status = timed_out_ ? SolveStatus::FeasibleTimeLimit : SolveStatus::Optimal;
        } else {
            sol.status = SolveStatus::Unsolved;
        }
        return sol;
    }

private:
    void dfs(int id) {
        if (timed_out_) return;
        if (deadline_.expired()) {
            timed_out_ = true;
            return;
        }
        if (id == inst_.total_tasks()) {
            JspView view = induce_jsp(inst_, assignment_);
            JspSearch jsp(view, deadline_, seed_);
            auto result = jsp.run(ub_, std::nullopt);
            if (result.timed_out) timed_out_ = true;
            if (result.starts && result.makespan < ub_) {
                ub_ = result.makespan;
                best_assignment_ = assignment_;
                best_starts_ = result.starts;
            }
            return;
        }
        for (const auto& opt : inst_.options_flat(id)) {
            assignment_.machine_of[id] = opt.machine;
            bounds_.apply(id, opt.duration, opt.machine);
            if (bounds_.value() < ub_) dfs(id + 1);
            bounds_.undo(id, opt.duration, opt.machine);
            assignment_.machine_of[id] = -1;
            if (timed_out_) return;
        }
    }

    const Instance& inst_;
    Deadline deadline_;
    std::uint64_t seed_;
    AssignmentBounds bounds_;
    Assignment assignment_;
    Time ub_ = kInf;
    Assignment best_assignment_;
    std::optional<std::vector<Time>> best_starts_;
    bool timed_out_ = false;
};

// ----------------------------------------------------------------------------
// Assignment symmetry breaking: minimal Hamming distance to the reference
// among assignments that still schedule within the target makespan.
// ----------------------------------------------------------------------------
class SymmetryBreakSearch {
public:
    SymmetryBreakSearch(const Instance& inst, const SymmetryBreakGoal& goal, Deadline deadline,
                        std::uint64_t seed)
        : inst_(inst), goal_(goal), deadline_(deadline), seed_(seed), bounds_(inst) {}

    Solution run() {
        assignment_.machine_of.assign(inst_.total_tasks(), -1);
        dfs(0, 0);
        Solution sol;
        if (best_starts_) {
            sol.assignment = best_assignment_;
            sol.schedule = Schedule{*best_starts_, best_makespan_};
            sol.status = timed_out_ ? SolveStatus::FeasibleTimeLimit : SolveStatus::Optimal;
        } else {
            sol.status = SolveStatus::Unsolved;
        }
        return sol;
    }

    Time best_distance() const { return best_dist_; }

private:
    void dfs(int id, Time dist) {
        if (timed_out_ || best_dist_ == 0) return;
        if (deadline_.expired()) {
            timed_out_ = true;
            return;
        }
        if (id == inst_.total_tasks()) {
            JspView view = induce_jsp(inst_, assignment_);
            JspSearch jsp(view, deadline_, seed_);
            auto result = jsp.run(goal_.target_makespan + 1, goal_.target_makespan);
            if (result.timed_out) timed_out_ = true;
            if (result.starts && result.makespan <= goal_.target_makespan && dist < best_dist_) {
                best_dist_ = dist;
                best_assignment_ = assignment_;
                best_starts_ = result.starts;
                best_makespan_ = result.makespan;
            }
            return;
        }

        // Reference machine first so near-zero distances surface early.
        const int ref_machine = goal_.reference_assignment.machine_of[id];
        const auto& opts = inst_.options_flat(id);
        for (int round = 0; round < 2; ++round) {
            for (const auto& opt : opts) {
                const bool is_ref = opt.machine == ref_machine;
                if ((round == 0) != is_ref) continue;
                Time next_dist = dist + (is_ref ? 0 : 2);
                if (next_dist >= best_dist_) continue;
                assignment_.machine_of[id] = opt.machine;
                bounds_.apply(id, opt.duration, opt.machine);
                if (bounds_.value() <= goal_.target_makespan) dfs(id + 1, next_dist);
                bounds_.undo(id, opt.duration, opt.machine);
                assignment_.machine_of[id] = -1;
                if (timed_out_ || best_dist_ == 0) return;
            }
        }
    }

    const Instance& inst_;
    const SymmetryBreakGoal& goal_;
    Deadline deadline_;
    std::uint64_t seed_;
    AssignmentBounds bounds_;
    Assignment assignment_;
    Time best_dist_ = kInf;
    Assignment best_assignment_;
    std::optional<std::vector<Time>> best_starts_;
    Time best_makespan_ = 0;
    bool timed_out_ = false;
};

// ----------------------------------------------------------------------------
// Fixed-ordering L1 projection: minimize sum |s_i - r_i| subject to the
// difference constraints of a fixed machine ordering plus the makespan cap.
// Solved exactly as a min-cost circulation (negative-cycle canceling); the
// optimal starts are recovered from residual shortest-path potentials.
// ----------------------------------------------------------------------------
class L1ProjectionSolver {
public:
    L1ProjectionSolver(const JspView& view, const std::vector<std::vector<int>>& machine_order,
                       const std::vector<Time>& ref, Time cap)
        : view_(view), n_(view.total_tasks()), ref_(ref) {
        // node 0 is ground (start-time zero); task i maps to node i + 1.
        graph_.resize(n_ + 1);
        for (int i = 0; i < n_; ++i) add_arc(0, i + 1, kInf, 0); // s_i >= 0
        int id = 0;
        for (int j = 0; j < view.num_jobs(); ++j) {
            for (int t = 0; t + 1 < view.tasks_per_job[j]; ++t)
                add_arc(id + t + 1, id + t + 2, kInf, -view.duration_of[id + t]);
            id += view.tasks_per_job[j];
            int last = id - 1;
            add_arc(last + 1, 0, kInf, -(view.duration_of[last] - cap)); // s_last <= cap - d
        }
        for (const auto& order : machine_order)
            for (std::size_t k = 0; k + 1 < order.size(); ++k)
                add_arc(order[k] + 1, order[k + 1] + 1, kInf, -view.duration_of[order[k]]);
        for (int i = 0; i < n_; ++i) {
            add_arc(0, i + 1, 1, -ref[i]); // deviation below the reference
            add_arc(i + 1, 0, 1, ref[i]);  // deviation above the reference
        }
    }

    // Requires a feasible ordering (no positive-weight constraint cycle).
    std::pair<Time, std::vector<Time>> solve() {
        while (cancel_negative_cycle()) {
        }
        // Residual shortest distances from ground; s = -distance.
        std::vector<Time> dist(n_ + 1, kInf);
        dist[0] = 0;
        for (int pass = 0; pass <= n_; ++pass) {
            bool changed = false;
            for (int u = 0; u <= n_; ++u) {
                if (dist[u] >= kInf) continue;
                for (const Arc& a : graph_[u]) {
                    if (a.capacity - a.flow <= 0) continue;
                    if (dist[u] + a.cost < dist[a.to]) {
                        dist[a.to] = dist[u] + a.cost;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        std::vector<Time> starts(n_);
        Time objective = 0;
        for (int i = 0; i < n_; ++i) {
            starts[i] = -dist[i + 1];
            objective += std::abs(starts[i] - ref_[i]);
        }
        return {objective, std::move(starts)};
    }

private:
    struct Arc {
        int to;
        Time capacity;
        Time cost;
        Time flow;
        int rev; // index of the paired reverse arc in graph_[to]
    };

    void add_arc(int from, int to, Time capacity, Time cost) {
        graph_[from].push_back({to, capacity, cost, 0, static_cast<int>(graph_[to].size())});
        graph_[to].push_back({from, 0, -cost, 0, static_cast<int>(graph_[from].size()) - 1});
    }

    bool cancel_negative_cycle() {
        const int nodes = n_ + 1;
        std::vector<Time> dist(nodes, 0);
        std::vector<std::pair<int, int>> pred(nodes, {-1, -1}); // (node, arc index)
        int cycle_node = -1;
        for (int pass = 0; pass < nodes; ++pass) {
            cycle_node = -1;
            for (int u = 0; u < nodes; ++u) {
                for (int k = 0; k < static_cast<int>(graph_[u].size()); ++k) {
                    const Arc& a = graph_[u][k];
                    if (a.capacity - a.flow <= 0) continue;
                    if (dist[u] + a.cost < dist[a.to]) {
                        dist[a.to] = dist[u] + a.cost;
                        pred[a.to] = {u, k};
                        cycle_node = a.to;
                    }
                }
            }
            if (cycle_node == -1) return false;
        }
        // Walk back n+1 steps to land inside the cycle, then collect it.
        int x = cycle_node;
        for (int i = 0; i <= n_; ++i) x = pred[x].first;
        std::vector<std::pair<int, int>> cycle;
        int u = x;
        do {
            cycle.push_back(pred[u]);
            u = pred[u].first;
        } while (u != x);

        Time push = kInf;
        for (auto [node, arc] : cycle) push = std::min(push, graph_[node][arc].capacity - graph_[node][arc].flow);
        for (auto [node, arc] : cycle) {
            Arc& a = graph_[node][arc];
            a.flow += push;
            graph_[a.to][a.rev].flow -= push;
        }
        return true;
    }

    const JspView& view_;
    int n_;
    std::vector<Time> ref_;
    std::vector<std::vector<Arc>> graph_;
};

// ----------------------------------------------------------------------------
// Start-time symmetry breaking for a fixed assignment: enumerate per-machine
// orderings depth first, bound by per-task reachable start windows, and solve
// the exact L1 projection at each complete ordering.
// ----------------------------------------------------------------------------
class StartSbSearch {
public:
    StartSbSearch(const JspView& view, const std::vector<Time>& ref, Time cap, Deadline deadline)
        : view_(view), ref_(ref), cap_(cap), deadline_(deadline) {
        const int n = view.total_tasks();
        tasks_on_machine_.resize(view.num_machines);
        for (int i = 0; i < n; ++i) tasks_on_machine_[view.machine_of[i]].push_back(i);
        // Branch in reference-start order so the reference ordering is the
        // first leaf reached.
        for (auto& tasks : tasks_on_machine_)
            std::stable_sort(tasks.begin(), tasks.end(),
                             [&](int a, int b) { return ref[a] < ref[b]; });
        order_.resize(view.num_machines);
        used_.assign(n, false);

        job_of_.resize(n);
        job_succ_.assign(n, -1);
        job_pred_.assign(n, -1);
        final_of_job_.resize(view.num_jobs());
        int id = 0;
        for (int j = 0; j < view.num_jobs(); ++j) {
            for (int t = 0; t < view.tasks_per_job[j]; ++t) {
                job_of_[id + t] = j;
                if (t > 0) {
                    job_succ_[id + t - 1] = id + t;
                    job_pred_[id + t] = id + t - 1;
                }
            }
            id += view.tasks_per_job[j];
            final_of_job_[j] = id - 1;
        }
    }

    struct Result {
        std::optional<std::vector<Time>> starts;
        Time distance = kInf;
        bool timed_out = false;
    };

    Result run() {
        dfs(0);
        Result r;
        r.timed_out = timed_out_;
        if (best_starts_) {
            r.starts = best_starts_;
            r.distance = best_obj_;
        }
        return r;
    }

private:
    // Start windows under the committed machine edges: earliest by forward
    // longest path, latest by backward propagation from the makespan cap.
    // Returns false when infeasible (cycle or empty window).
    bool windows(std::vector<Time>& earliest, std::vector<Time>& latest) const {
        const int n = view_.total_tasks();
        std::vector<std::vector<int>> succ(n);
        std::vector<int> indegree(n, 0);
        for (int i = 0; i < n; ++i)
            if (job_succ_[i] != -1) {
                succ[i].push_back(job_succ_[i]);
                ++indegree[job_succ_[i]];
            }
        for (const auto& order : order_)
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                succ[order[k]].push_back(order[k + 1]);
                ++indegree[order[k + 1]];
            }

        std::vector<int> topo;
        topo.reserve(n);
        for (int i = 0; i < n; ++i)
            if (indegree[i] == 0) topo.push_back(i);
        earliest.assign(n, 0);
        std::size_t head = 0;
        while (head < topo.size()) {
            int u = topo[head++];
            for (int v : succ[u]) {
                earliest[v] = std::max(earliest[v], earliest[u] + view_.duration_of[u]);
                if (--indegree[v] == 0) topo.push_back(v);
            }
        }
        if (static_cast<int>(topo.size()) != n) return false;

        latest.assign(n, kInf);
        for (int j = 0; j < view_.num_jobs(); ++j)
            latest[final_of_job_[j]] = cap_ - view_.duration_of[final_of_job_[j]];
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            int u = *it;
            for (int v : succ[u]) latest[u] = std::min(latest[u], latest[v] - view_.duration_of[u]);
            if (earliest[u] > latest[u]) return false;
        }
        return true;
    }

    void dfs(int machine) {
        if (timed_out_) return;
        if (deadline_.expired()) {
            timed_out_ = true;
            return;
        }
        while (machine < view_.num_machines &&
               order_[machine].size() == tasks_on_machine_[machine].size())
            ++machine;

        std::vector<Time> earliest, latest;
        if (!windows(earliest, latest)) return;
        Time obj_lb = 0;
        for (int i = 0; i < view_.total_tasks(); ++i)
            obj_lb += std::max<Time>(0, std::max(earliest[i] - ref_[i], ref_[i] - latest[i]));
        if (obj_lb >= best_obj_) return;

        if (machine == view_.num_machines) {
            L1ProjectionSolver lp(view_, order_, ref_, cap_);
            auto [objective, starts] = lp.solve();
            if (objective < best_obj_) {
                best_obj_ = objective;
                best_starts_ = std::move(starts);
            }
            return;
        }

        for (int i : tasks_on_machine_[machine]) {
            if (used_[i]) continue;
            used_[i] = true;
            order_[machine].push_back(i);
            dfs(machine);
            order_[machine].pop_back();
            used_[i] = false;
            if (timed_out_) return;
        }
    }

    const JspView& view_;
    const std::vector<Time>& ref_;
    Time cap_;
    Deadline deadline_;
    std::vector<std::vector<int>> tasks_on_machine_;
    std::vector<std::vector<int>> order_;
    std::vector<bool> used_;
    std::vector<int> job_of_;
    std::vector<int> job_succ_;
    std::vector<int> job_pred_;
    std::vector<int> final_of_job_;
    Time best_obj_ = kInf;
    std::optional<std::vector<Time>> best_starts_;
    bool timed_out_ = false;
};

} // namespace

Solution solve_fjsp(const Instance& inst, const SolveOptions& opts) {
    FjspSearch search(inst, Deadline::in(opts.time_limit_seconds), opts.seed);
    return search.run();
}

Solution solve_jsp(const JspView& view, const SolveOptions& opts,
                   const std::optional<SymmetryBreakGoal>& goal) {
    Deadline deadline = Deadline::in(opts.time_limit_seconds);
    Solution sol;
    sol.assignment = Assignment{view.machine_of};
    if (!goal) {
        JspSearch search(view, deadline, opts.seed);
        auto result = search.run(kInf, std::nullopt);
        if (result.starts) {
            sol.schedule = Schedule{*result.starts, result.makespan};
            sol.status = result.timed_out ? SolveStatus::FeasibleTimeLimit : SolveStatus::Optimal;
        }
        return sol;
    }
    if (!goal->reference_starts)
        throw std::invalid_argument("solve_jsp symmetry breaking requires reference starts");
    StartSbSearch search(view, *goal->reference_starts, goal->target_makespan, deadline);
    auto result = search.run();
    if (result.starts) {
        sol.schedule = Schedule{*result.starts, view_makespan(view, *result.starts)};
        sol.status = result.timed_out ? SolveStatus::FeasibleTimeLimit : SolveStatus::Optimal;
    }
    return sol;
}

Solution solve_symmetry_breaking(const Instance& inst, const SymmetryBreakGoal& goal,
                                 const SolveOptions& opts) {
    // The reference need not be compatible with the instance; it is only a
    // target for the Hamming objective.
    if (static_cast<int>(goal.reference_assignment.machine_of.size()) != inst.total_tasks())
        throw std::invalid_argument("reference assignment covers the wrong task count");
    SymmetryBreakSearch search(inst, goal, Deadline::in(opts.time_limit_seconds), opts.seed);
    return search.run();
}

Solution brute_force_fjsp(const Instance& inst) {
    const int n = inst.total_tasks();
    if (n > 8) throw std::invalid_argument("brute_force_fjsp is guarded to instances with at most 8 tasks");

    Solution best;
    Time best_makespan = kInf;
    Assignment assignment;
    assignment.machine_of.assign(n, -1);

    // Permutation product over machines for one fixed assignment.
    auto evaluate_assignment = [&](const Assignment& a) {
        JspView view = induce_jsp(inst, a);
        std::vector<std::vector<int>> tasks(inst.num_machines());
        for (int i = 0; i < n; ++i) tasks[view.machine_of[i]].push_back(i);

        std::vector<std::vector<int>> order(inst.num_machines());
        auto rec = [&](auto&& self, int m) -> void {
            if (m == inst.num_machines()) {
                auto starts = earliest_starts(view, order);
                if (!starts) return; // ordering conflicts with job precedence
                Time ms = view_makespan(view, *starts);
                if (ms < best_makespan) {
                    best_makespan = ms;
                    best.assignment = a;
                    best.schedule = Schedule{*starts, ms};
                }
                return;
            }
            order[m] = tasks[m];
            std::sort(order[m].begin(), order[m].end());
            do {
                self(self, m + 1);
            } while (std::next_permutation(order[m].begin(), order[m].end()));
        };
        rec(rec, 0);
    };

    auto enumerate = [&](auto&& self, int id) -> void {
        if (id == n) {
            evaluate_assignment(assignment);
            return;
        }
        for (const auto& opt : inst.options_flat(id)) {
            assignment.machine_of[id] = opt.machine;
            self(self, id + 1);
        }
        assignment.machine_of[id] = -1;
    };
    enumerate(enumerate, 0);

    best.status = best_makespan < kInf ? SolveStatus::Optimal : SolveStatus::Unsolved;
    return best;
}

Time assignment_hamming(const Assignment& a, const Assignment& b) {
    if (a.machine_of.size() != b.machine_of.size())
        throw std::invalid_argument("assignments cover different task counts");
    Time mismatches = 0;
    for (std::size_t i = 0; i < a.machine_of.size(); ++i)
        if (a.machine_of[i] != b.machine_of[i]) ++mismatches;
    return 2 * mismatches;
}

} // namespace fjsp
