#ifndef FJSP_BENCH_HPP
#define FJSP_BENCH_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fjsp/core.hpp"
#include "fjsp/solver.hpp"

namespace fjsp {

// (model - reference) / reference. Throws on a non-positive reference.
double optimality_gap(double model_makespan, double ref_makespan);

// exp(mean(ln(1 + g))) - 1. Requires all gaps > -1 and a non-empty list.
double shifted_geomean(const std::vector<double>& gaps);

struct NamedMethod {
    std::string name;
    std::function<Solution(const Instance&)> run;
};

struct GapReport {
    struct MethodRow {
        std::string name;
        double gap_geomean = 0;        // shifted geometric mean over solved cells
        double mean_solve_seconds = 0; // wall clock, annotation only
        double feasibility_rate = 0;
        int failures = 0;
        std::vector<double> gaps; // per instance; NaN where the method failed
    };
    std::vector<MethodRow> methods;
    std::vector<Time> reference_makespans;
    std::vector<std::string> reference_status; // negative gaps are only meaningful
                                               // when the reference timed out
};

struct BenchOptions {
    SolveOptions solver; // for computing missing references
    int workers = 1;
};

// Runs every method on every instance, timing each cell. Reference makespans
// may be supplied (e.g. from dataset records); missing ones are solved.
// Method failures are recorded per cell and excluded from the aggregate.
GapReport run_benchmark(const std::vector<Instance>& instances,
                        const std::vector<NamedMethod>& methods,
                        const std::vector<std::optional<Time>>& references, const BenchOptions& opts);

std::string render_table(const GapReport& report);
std::string report_json(const GapReport& report);

} // namespace fjsp

#endif // FJSP_BENCH_HPP
