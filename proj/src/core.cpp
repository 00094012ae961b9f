#include "fjsp/core.hpp"

#include <algorithm>

namespace fjsp {

Instance::Instance(int num_machines, std::vector<std::vector<std::vector<MachineOption>>> job_tasks)
    : num_machines_(num_machines) {
    tasks_per_job_.reserve(job_tasks.size());
    task_offset_.reserve(job_tasks.size());
    int offset = 0;
    for (auto& tasks : job_tasks) {
        task_offset_.push_back(offset);
        tasks_per_job_.push_back(static_cast<int>(tasks.size()));
        offset += static_cast<int>(tasks.size());
        for (auto& opts : tasks) {
            std::sort(opts.begin(), opts.end(),
                      [](const MachineOption& a, const MachineOption& b) { return a.machine < b.machine; });
            options_.push_back(std::move(opts));
        }
    }
}

std::pair<int, int> Instance::job_task(int id) const {
    int job = static_cast<int>(std::upper_bound(task_offset_.begin(), task_offset_.end(), id) -
                               task_offset_.begin()) -
              1;
    return {job, id - task_offset_[job]};
}

std::optional<Time> Instance::duration(int job, int task, int machine) const {
    for (const auto& opt : options(job, task))
        if (opt.machine == machine) return opt.duration;
    return std::nullopt;
}

Time Instance::max_duration() const {
    Time best = 0;
    for (const auto& opts : options_)
        for (const auto& opt : opts) best = std::max(best, opt.duration);
    return best;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleTimeLimit: return "feasible_time_limit";
        case SolveStatus::Unsolved: return "unsolved";
    }
    return "unsolved";
}

std::optional<SolveStatus> solve_status_from_string(const std::string& s) {
    if (s == "optimal") return SolveStatus::Optimal;
    if (s == "feasible_time_limit") return SolveStatus::FeasibleTimeLimit;
    if (s == "unsolved") return SolveStatus::Unsolved;
    return std::nullopt;
}

int JspView::task_id(int job, int task) const {
    int offset = 0;
    for (int j = 0; j < job; ++j) offset += tasks_per_job[j];
    return offset + task;
}

std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> errors;
    if (inst.num_jobs() <= 0) errors.push_back("instance has no jobs");
    if (inst.num_machines() <= 0) errors.push_back("instance has no machines");
    for (int j = 0; j < inst.num_jobs(); ++j) {
        if (inst.num_tasks(j) <= 0) {
            errors.push_back("job " + std::to_string(j) + " has no tasks");
            continue;
        }
        for (int t = 0; t < inst.num_tasks(j); ++t) {
            const auto& opts = inst.options(j, t);
            const std::string where = "(" + std::to_string(j) + "," + std::to_string(t) + ")";
            if (opts.empty()) errors.push_back("no compatible machine for " + where);
            int prev_machine = -1;
            for (const auto& opt : opts) {
                if (opt.machine < 0 || opt.machine >= inst.num_machines())
                    errors.push_back("machine id " + std::to_string(opt.machine) + " out of range at " + where);
                if (opt.machine == prev_machine)
                    errors.push_back("duplicate machine " + std::to_string(opt.machine) + " at " + where);
                if (opt.duration < 1) errors.push_back("non-positive duration at " + where);
                prev_machine = opt.machine;
            }
        }
    }
    return errors;
}

std::optional<std::string> check_assignment(const Instance& inst, const Assignment& a) {
    if (static_cast<int>(a.machine_of.size()) != inst.total_tasks())
        return "assignment covers " + std::to_string(a.machine_of.size()) + " tasks, instance has " +
               std::to_string(inst.total_tasks());
    for (int j = 0; j < inst.num_jobs(); ++j)
        for (int t = 0; t < inst.num_tasks(j); ++t) {
            int m = a.machine_of[inst.task_id(j, t)];
            if (!inst.duration(j, t, m))
                return "assigned machine " + std::to_string(m) + " incompatible with (" + std::to_string(j) +
                       "," + std::to_string(t) + ")";
        }
    return std::nullopt;
}

namespace {

Time assigned_duration(const Instance& inst, const Assignment& a, int job, int task) {
    return *inst.duration(job, task, a.machine_of[inst.task_id(job, task)]);
}

} // namespace

ViolationReport check_feasibility(const Instance& inst, const Assignment& a, const Schedule& s) {
    if (auto err = check_assignment(inst, a)) throw std::invalid_argument(*err);
    if (static_cast<int>(s.start.size()) != inst.total_tasks())
        throw std::invalid_argument("schedule start vector has wrong size");

    ViolationReport report;
    for (int j = 0; j < inst.num_jobs(); ++j) {
        for (int t = 0; t + 1 < inst.num_tasks(j); ++t) {
            Time end = s.start[inst.task_id(j, t)] + assigned_duration(inst, a, j, t);
            Time overrun = std::max<Time>(0, end - s.start[inst.task_id(j, t + 1)]);
            if (overrun > 0) {
                report.job_precedence.push_back({j, t, overrun});
                report.total += overrun;
            }
        }
    }
    const int n = inst.total_tasks();
    for (int ia = 0; ia < n; ++ia) {
        auto [ja, ta] = inst.job_task(ia);
        for (int ib = ia + 1; ib < n; ++ib) {
            auto [jb, tb] = inst.job_task(ib);
            if (ja == jb) continue;
            int m = a.machine_of[ia];
            if (m != a.machine_of[ib]) continue;
            Time end_a = s.start[ia] + assigned_duration(inst, a, ja, ta);
            Time end_b = s.start[ib] + assigned_duration(inst, a, jb, tb);
            Time overlap = std::min(std::max<Time>(0, end_b - s.start[ia]),
                                    std::max<Time>(0, end_a - s.start[ib]));
            if (overlap > 0) {
                report.machine_overlap.push_back({ja, ta, jb, tb, m, overlap});
                report.total += overlap;
            }
        }
    }
    return report;
}

Time makespan(const Instance& inst, const Assignment& a, const Schedule& s) {
    if (auto err = check_assignment(inst, a)) throw std::invalid_argument(*err);
    Time result = 0;
    for (int j = 0; j < inst.num_jobs(); ++j) {
        int last = inst.num_tasks(j) - 1;
        result = std::max(result, s.start[inst.task_id(j, last)] + assigned_duration(inst, a, j, last));
    }
    return result;
}

JspView induce_jsp(const Instance& inst, const Assignment& a) {
    if (auto err = check_assignment(inst, a)) throw std::invalid_argument(*err);
    JspView view;
    view.num_machines = inst.num_machines();
    view.tasks_per_job = inst.tasks_per_job();
    view.machine_of = a.machine_of;
    view.duration_of.resize(inst.total_tasks());
    for (int j = 0; j < inst.num_jobs(); ++j)
        for (int t = 0; t < inst.num_tasks(j); ++t)
            view.duration_of[inst.task_id(j, t)] = assigned_duration(inst, a, j, t);
    return view;
}

Schedule make_schedule(const Instance& inst, const Assignment& a, std::vector<Time> starts) {
    Schedule s;
    s.start = std::move(starts);
    s.makespan = makespan(inst, a, s);
    return s;
}

} // namespace fjsp
