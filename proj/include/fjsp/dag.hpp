#ifndef FJSP_DAG_HPP
#define FJSP_DAG_HPP

#include <optional>
#include <vector>

#include "fjsp/core.hpp"

namespace fjsp {

// Earliest start times under fixed per-machine task orders: the longest path
// through job-precedence and machine-succession edges, weighted by the
// predecessor's duration. Returns nullopt when the combined relation has a
// cycle. machine_order[m] lists flat task ids in processing order.
std::optional<std::vector<Time>> earliest_starts(const JspView& view,
                                                 const std::vector<std::vector<int>>& machine_order);

} // namespace fjsp

#endif // FJSP_DAG_HPP
