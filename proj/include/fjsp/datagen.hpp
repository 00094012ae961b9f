#ifndef FJSP_DATAGEN_HPP
#define FJSP_DATAGEN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fjsp/core.hpp"
#include "fjsp/instance_io.hpp"
#include "fjsp/solver.hpp"

namespace fjsp {

// Slowdown-perturbation family: `count` draws of a factor from
// (factor_lo, factor_hi], applied to one impacted machine.
struct PerturbSpec {
    int impacted_machine = 0;
    double factor_lo = 1.0;
    double factor_hi = 1.5;
    std::uint64_t rng_seed = 0;
    int count = 1;
    bool vary_machine = false;  // draw the impacted machine per instance
    bool symmetry_break = true; // false: label with independent plain solves
};

// Disjoint, exhaustive 8:1:1 split over record positions; the rounding
// remainder goes to train.
struct DatasetSplit {
    std::vector<int> train;
    std::vector<int> validation;
    std::vector<int> test;

    bool operator==(const DatasetSplit&) const = default;
};

DatasetSplit split_811(int count, std::uint64_t rng_seed);

// Scales every duration on the impacted machine to max(1, round(d * factor)).
// Factor must lie in [1.0, 1.5].
Instance perturb(const Instance& base, int machine, double factor);

// The family's single symmetry-breaking reference: the optimal solution of
// the base instance slowed down by `reference_delay` on the impacted machine.
Solution build_reference(const Instance& base, int machine, const SolveOptions& opts,
                         double reference_delay = 0.25);

struct GenerationResult {
    std::vector<DatasetRecord> records;
    DatasetSplit split;
    int failures = 0;
    double solve_seconds = 0; // aggregate wall time; never serialized into records
};

// Draws, perturbs and solves `count` instances across `workers` threads.
// Record order follows the draw index regardless of scheduling, so the output
// is byte-identical for any worker count.
GenerationResult generate_dataset(const Instance& base, const PerturbSpec& spec,
                                  const SolveOptions& opts, const Solution& reference, int workers);

struct SchedulingCandidate {
    int instance_index = 0; // record position in the source dataset
    Assignment assignment;
};

struct AugmentOptions {
    // Reference schedule starts for start-time symmetry breaking; empty means
    // standard labels (each induced JSP solved independently).
    std::optional<std::vector<Time>> reference_starts;
    int cap = 20000;
    std::uint64_t rng_seed = 0;
    int workers = 1;
};

struct AugmentResult {
    std::vector<DatasetRecord> records;
    int failures = 0;
    double solve_seconds = 0;
};

// Builds the scheduling-stage dataset: ground-truth assignments from the
// records plus branched candidates, deduplicated, capped, each labeled with
// the start vector of its induced JSP (symmetry-broken toward the reference
// schedule when reference_starts is set).
AugmentResult augment_scheduling_dataset(const std::vector<DatasetRecord>& records,
                                         const std::vector<SchedulingCandidate>& candidates,
                                         const AugmentOptions& aopts, const SolveOptions& sopts);

} // namespace fjsp

#endif // FJSP_DATAGEN_HPP
