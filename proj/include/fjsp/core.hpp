#ifndef FJSP_CORE_HPP
#define FJSP_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fjsp {

// All solver, heuristic and recovery outputs are integral times. Fractional
// start-time predictions never enter a Schedule directly; they pass through
// recovery first.
using Time = std::int64_t;

struct MachineOption {
    int machine = 0;
    Time duration = 0;

    bool operator==(const MachineOption&) const = default;
};

// Immutable FJSP instance. Tasks are stored in processing order: task 0 of a
// job executes first and task t must finish before task t+1 starts. A task is
// incompatible with a machine iff the (task, machine) pair is absent from the
// option list; there is no sentinel duration.
class Instance {
public:
    Instance() = default;
    // job_tasks[j][t] lists the compatible machines of task t of job j.
    Instance(int num_machines, std::vector<std::vector<std::vector<MachineOption>>> job_tasks);

    int num_jobs() const { return static_cast<int>(tasks_per_job_.size()); }
    int num_machines() const { return num_machines_; }
    int num_tasks(int job) const { return tasks_per_job_[job]; }
    const std::vector<int>& tasks_per_job() const { return tasks_per_job_; }
    int total_tasks() const { return static_cast<int>(options_.size()); }

    // Flat task ids are job-major: job 0's tasks first, in processing order.
    int task_id(int job, int task) const { return task_offset_[job] + task; }
    std::pair<int, int> job_task(int id) const;

    const std::vector<MachineOption>& options(int job, int task) const {
        return options_[task_id(job, task)];
    }
    const std::vector<MachineOption>& options_flat(int id) const { return options_[id]; }

    std::optional<Time> duration(int job, int task, int machine) const;

    // Largest duration anywhere in the instance; feature normalization scale.
    Time max_duration() const;

    bool operator==(const Instance&) const = default;

private:
    int num_machines_ = 0;
    std::vector<int> tasks_per_job_;
    std::vector<int> task_offset_;
    std::vector<std::vector<MachineOption>> options_; // flat task id -> sorted by machine
};

// Machine choice per task, indexed by flat task id.
struct Assignment {
    std::vector<int> machine_of;

    bool operator==(const Assignment&) const = default;
};

// Start times per task (flat ids) plus the resulting makespan.
struct Schedule {
    std::vector<Time> start;
    Time makespan = 0;

    bool operator==(const Schedule&) const = default;
};

enum class SolveStatus { Optimal, FeasibleTimeLimit, Unsolved };

const char* to_string(SolveStatus s);
std::optional<SolveStatus> solve_status_from_string(const std::string& s);

struct Solution {
    Assignment assignment;
    Schedule schedule;
    SolveStatus status = SolveStatus::Unsolved;
};

// FJSP with the machine choice fixed: one machine and one duration per task.
struct JspView {
    int num_machines = 0;
    std::vector<int> tasks_per_job;
    std::vector<int> machine_of;   // flat task id
    std::vector<Time> duration_of; // flat task id

    int num_jobs() const { return static_cast<int>(tasks_per_job.size()); }
    int total_tasks() const { return static_cast<int>(machine_of.size()); }
    int task_id(int job, int task) const;
};

struct ViolationReport {
    struct JobPrecedence {
        int job = 0;
        int task = 0; // violated pair is (task, task+1)
        Time magnitude = 0;
    };
    struct MachineOverlap {
        int job_a = 0, task_a = 0;
        int job_b = 0, task_b = 0;
        int machine = 0;
        Time magnitude = 0;
    };

    std::vector<JobPrecedence> job_precedence;
    std::vector<MachineOverlap> machine_overlap;
    Time total = 0;

    bool feasible() const { return total == 0; }
};

// Empty iff all Instance invariants hold; each message names the offender.
std::vector<std::string> validate_instance(const Instance& inst);

// Empty iff the assignment picks a compatible machine for every task.
std::optional<std::string> check_assignment(const Instance& inst, const Assignment& a);

// Job-precedence magnitude per consecutive pair: max(0, start + dur - next_start).
// Overlap magnitude per same-machine pair of distinct jobs: the smaller of the
// two one-sided overhangs, min over orderings of max(0, other_end - own_start).
// Throws std::invalid_argument if the assignment is incompatible.
ViolationReport check_feasibility(const Instance& inst, const Assignment& a, const Schedule& s);

// Max over jobs of the completion time of the job's final task.
Time makespan(const Instance& inst, const Assignment& a, const Schedule& s);

JspView induce_jsp(const Instance& inst, const Assignment& a);

// Fills in the makespan field from the start vector.
Schedule make_schedule(const Instance& inst, const Assignment& a, std::vector<Time> starts);

} // namespace fjsp

#endif // FJSP_CORE_HPP
