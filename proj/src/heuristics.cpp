#include "fjsp/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fjsp {

namespace {

constexpr Time kInf = std::numeric_limits<Time>::max() / 4;

const char* sequencing_name(SequencingRule r) {
    switch (r) {
        case SequencingRule::Fifo: return "fifo";
        case SequencingRule::Mopnr: return "mopnr";
        case SequencingRule::Lwkr: return "lwkr";
        case SequencingRule::Mwkr: return "mwkr";
    }
    return "fifo";
}

const char* machine_name(MachineRule r) {
    return r == MachineRule::Spt ? "spt" : "eet";
}

} // namespace

std::string to_string(RulePair rules) {
    return std::string(sequencing_name(rules.sequencing_rule)) + "_" + machine_name(rules.machine_rule);
}

std::optional<RulePair> rule_pair_from_string(const std::string& name) {
    for (const RulePair& pair : all_rule_pairs())
        if (to_string(pair) == name) return pair;
    return std::nullopt;
}

const std::vector<RulePair>& all_rule_pairs() {
    static const std::vector<RulePair> pairs = {
        {SequencingRule::Fifo, MachineRule::Spt},  {SequencingRule::Fifo, MachineRule::Eet},
        {SequencingRule::Mopnr, MachineRule::Spt}, {SequencingRule::Mopnr, MachineRule::Eet},
        {SequencingRule::Lwkr, MachineRule::Spt},  {SequencingRule::Lwkr, MachineRule::Eet},
        {SequencingRule::Mwkr, MachineRule::Spt},  {SequencingRule::Mwkr, MachineRule::Eet},
    };
    return pairs;
}

namespace {

struct QueueEntry {
    int task;
    Time arrival;
};

class DispatchSimulator {
public:
    DispatchSimulator(const Instance& inst, RulePair rules) : inst_(inst), rules_(rules) {
        const int n = inst.total_tasks();
        mean_duration_.resize(n);
        job_of_.resize(n);
        for (int i = 0; i < n; ++i) {
            auto [j, t] = inst.job_task(i);
            job_of_[i] = j;
            double sum = 0;
            for (const auto& opt : inst.options_flat(i)) sum += static_cast<double>(opt.duration);
            mean_duration_[i] = sum / static_cast<double>(inst.options_flat(i).size());
        }
    }

    Solution run() {
        const int n = inst_.total_tasks();
        const int jobs = inst_.num_jobs();
        const int machines = inst_.num_machines();

        assignment_.assign(n, -1);
        starts_.assign(n, 0);
        next_task_.assign(jobs, 0);
        completed_.assign(jobs, 0);
        remaining_work_.assign(jobs, 0.0);
        for (int i = 0; i < n; ++i) remaining_work_[job_of_[i]] += mean_duration_[i];
        queue_.assign(machines, {});
        busy_until_.assign(machines, -1); // -1 = idle
        running_task_.assign(machines, -1);

        Time now = 0;
        for (int j = 0; j < jobs; ++j) make_ready(j, now);

        int done = 0;
        while (done < n) {
            // Start phase: idle machines pull from their queues, id ascending.
            for (int m = 0; m < machines; ++m) {
                if (busy_until_[m] >= 0 || queue_[m].empty()) continue;
                int pick = pick_from_queue(m);
                const QueueEntry entry = queue_[m][pick];
                queue_[m].erase(queue_[m].begin() + pick);
                starts_[entry.task] = now;
                busy_until_[m] = now + *inst_.duration(job_of_[entry.task],
                                                       inst_.job_task(entry.task).second, m);
                running_task_[m] = entry.task;
            }

            // Advance to the next completion.
            Time next_time = kInf;
            for (int m = 0; m < machines; ++m)
                if (busy_until_[m] >= 0) next_time = std::min(next_time, busy_until_[m]);
            now = next_time;

            // Completion phase, machine id ascending.
            for (int m = 0; m < machines; ++m) {
                if (busy_until_[m] != now) continue;
                int task = running_task_[m];
                int j = job_of_[task];
                busy_until_[m] = -1;
                running_task_[m] = -1;
                ++completed_[j];
                ++done;
                remaining_work_[j] -= mean_duration_[task];
                ++next_task_[j];
                if (next_task_[j] < inst_.num_tasks(j)) make_ready(j, now);
            }
        }

        Assignment a{assignment_};
        Solution sol;
        sol.assignment = a;
        sol.schedule = make_schedule(inst_, a, starts_);
        sol.status = SolveStatus::FeasibleTimeLimit;
        return sol;
    }

private:
    // Time at which the machine would finish everything already committed to
    // it: the running task plus its whole queue.
    Time committed_finish(int m, Time now) const {
        Time t = std::max(now, busy_until_[m] >= 0 ? busy_until_[m] : now);
        for (const QueueEntry& e : queue_[m])
            t += *inst_.duration(job_of_[e.task], inst_.job_task(e.task).second, m);
        return t;
    }

    void make_ready(int j, Time now) {
        const int task = inst_.task_id(j, next_task_[j]);
        const auto& opts = inst_.options_flat(task);
        int best_machine = -1;
        Time best_key = kInf;
        for (const auto& opt : opts) {
            Time key = rules_.machine_rule == MachineRule::Spt
                           ? opt.duration
                           : std::max(committed_finish(opt.machine, now), now) + opt.duration;
            if (key < best_key) { // ties fall to the lowest machine id
                best_key = key;
                best_machine = opt.machine;
            }
        }
        assignment_[task] = best_machine;
        queue_[best_machine].push_back({task, now});
    }

    int pick_from_queue(int m) const {
        const auto& q = queue_[m];
        int best = 0;
        for (int k = 1; k < static_cast<int>(q.size()); ++k) {
            if (better_in_queue(q[k], q[best])) best = k;
        }
        return best;
    }

    bool better_in_queue(const QueueEntry& a, const QueueEntry& b) const {
        const int ja = job_of_[a.task];
        const int jb = job_of_[b.task];
        switch (rules_.sequencing_rule) {
            case SequencingRule::Fifo:
                if (a.arrival != b.arrival) return a.arrival < b.arrival;
                break;
            case SequencingRule::Mopnr: {
                int ra = inst_.num_tasks(ja) - completed_[ja];
                int rb = inst_.num_tasks(jb) - completed_[jb];
                if (ra != rb) return ra > rb;
                break;
            }
            case SequencingRule::Lwkr:
                if (remaining_work_[ja] != remaining_work_[jb])
                    return remaining_work_[ja] < remaining_work_[jb];
                break;
            case SequencingRule::Mwkr:
                if (remaining_work_[ja] != remaining_work_[jb])
                    return remaining_work_[ja] > remaining_work_[jb];
                break;
        }
        return a.task < b.task;
    }

    const Instance& inst_;
    RulePair rules_;
    std::vector<double> mean_duration_;
    std::vector<int> job_of_;

    std::vector<int> assignment_;
    std::vector<Time> starts_;
    std::vector<int> next_task_;
    std::vector<int> completed_;
    std::vector<double> remaining_work_;
    std::vector<std::vector<QueueEntry>> queue_;
    std::vector<Time> busy_until_;
    std::vector<int> running_task_;
};

} // namespace

Solution dispatch(const Instance& inst, RulePair rules) {
    if (!validate_instance(inst).empty()) throw std::invalid_argument("dispatch requires a valid instance");
    return DispatchSimulator(inst, rules).run();
}

} // namespace fjsp
