#ifndef FJSP_HEURISTICS_HPP
#define FJSP_HEURISTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "fjsp/core.hpp"

namespace fjsp {

enum class MachineRule { Spt, Eet };
enum class SequencingRule { Fifo, Mopnr, Lwkr, Mwkr };

// One of the eight two-stage baselines: a machine-selection rule applied when
// a task becomes ready, and a job-sequencing rule applied when a machine
// frees up.
struct RulePair {
    SequencingRule sequencing_rule = SequencingRule::Fifo;
    MachineRule machine_rule = MachineRule::Spt;

    bool operator==(const RulePair&) const = default;
};

std::string to_string(RulePair rules);
std::optional<RulePair> rule_pair_from_string(const std::string& name);
const std::vector<RulePair>& all_rule_pairs();

// Non-delay event simulation. Ready tasks pick a machine immediately (SPT:
// smallest duration; EET: earliest completion given all committed work on the
// machine) and join its queue; idle machines pick the next job by the
// sequencing rule. Ties everywhere break toward lower job, task, then machine
// id; simultaneous machine events are processed machine-id ascending.
Solution dispatch(const Instance& inst, RulePair rules);

} // namespace fjsp

#endif // FJSP_HEURISTICS_HPP
