#include "fjsp/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fjsp/worker_pool.hpp"

namespace fjsp {

double optimality_gap(double model_makespan, double ref_makespan) {
    if (ref_makespan <= 0) throw std::invalid_argument("reference makespan must be positive");
    return (model_makespan - ref_makespan) / ref_makespan;
}

double shifted_geomean(const std::vector<double>& gaps) {
    if (gaps.empty()) throw std::invalid_argument("shifted_geomean of an empty list");
    double sum = 0;
    for (double g : gaps) {
        if (g <= -1.0) throw std::invalid_argument("gap must exceed -1");
        sum += std::log1p(g);
    }
    return std::expm1(sum / static_cast<double>(gaps.size()));
}

GapReport run_benchmark(const std::vector<Instance>& instances,
                        const std::vector<NamedMethod>& methods,
                        const std::vector<std::optional<Time>>& references, const BenchOptions& opts) {
    const int n = static_cast<int>(instances.size());
    if (!references.empty() && static_cast<int>(references.size()) != n)
        throw std::invalid_argument("reference list size mismatch");

    GapReport report;
    report.reference_makespans.assign(static_cast<std::size_t>(n), 0);
    report.reference_status.assign(static_cast<std::size_t>(n), "optimal");
    run_pool(opts.workers, n, [&](int i) {
        if (!references.empty() && references[static_cast<std::size_t>(i)]) {
            report.reference_makespans[static_cast<std::size_t>(i)] =
                *references[static_cast<std::size_t>(i)];
            return;
        }
        Solution ref = solve_fjsp(instances[static_cast<std::size_t>(i)], opts.solver);
        if (ref.status == SolveStatus::Unsolved)
            throw std::runtime_error("reference solve failed on instance " + std::to_string(i));
        report.reference_makespans[static_cast<std::size_t>(i)] = ref.schedule.makespan;
        report.reference_status[static_cast<std::size_t>(i)] = to_string(ref.status);
    });

    report.methods.reserve(methods.size());
    for (const auto& method : methods) {
        GapReport::MethodRow row;
        row.name = method.name;
        row.gaps.assign(static_cast<std::size_t>(n), std::nan(""));
        std::vector<double> seconds(static_cast<std::size_t>(n), 0.0);
        std::vector<int> feasible(static_cast<std::size_t>(n), 0);
        std::vector<int> failed(static_cast<std::size_t>(n), 0);
        run_pool(opts.workers, n, [&](int i) {
            const Instance& inst = instances[static_cast<std::size_t>(i)];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                Solution sol = method.run(inst);
                seconds[static_cast<std::size_t>(i)] =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                if (sol.status == SolveStatus::Unsolved) {
                    failed[static_cast<std::size_t>(i)] = 1;
                    return;
                }
                if (check_feasibility(inst, sol.assignment, sol.schedule).feasible())
                    feasible[static_cast<std::size_t>(i)] = 1;
                row.gaps[static_cast<std::size_t>(i)] = optimality_gap(
                    static_cast<double>(sol.schedule.makespan),
                    static_cast<double>(report.reference_makespans[static_cast<std::size_t>(i)]));
            } catch (const std::exception&) {
                failed[static_cast<std::size_t>(i)] = 1;
            }
        });

        std::vector<double> solved;
        double time_sum = 0;
        int feasible_count = 0;
        for (int i = 0; i < n; ++i) {
            if (!std::isnan(row.gaps[static_cast<std::size_t>(i)]))
                solved.push_back(row.gaps[static_cast<std::size_t>(i)]);
            row.failures += failed[static_cast<std::size_t>(i)];
            feasible_count += feasible[static_cast<std::size_t>(i)];
            time_sum += seconds[static_cast<std::size_t>(i)];
        }
        row.gap_geomean = solved.empty() ? std::nan("") : shifted_geomean(solved);
        row.mean_solve_seconds = n > 0 ? time_sum / n : 0;
        row.feasibility_rate = n > 0 ? static_cast<double>(feasible_count) / n : 0;
        report.methods.push_back(std::move(row));
    }
    return report;
}

std::string render_table(const GapReport& report) {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-12s %10s %10s %8s %6s\n", "Method", "Gap(%)", "Sol.T(s)",
                  "Feas", "Fail");
    out << line;
    for (const auto& row : report.methods) {
        std::snprintf(line, sizeof(line), "%-12s %10.2f %10.4f %8.2f %6d\n", row.name.c_str(),
                      row.gap_geomean * 100.0, row.mean_solve_seconds, row.feasibility_rate,
                      row.failures);
        out << line;
    }
    return out.str();
}

std::string report_json(const GapReport& report) {
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& row : report.methods) {
        nlohmann::json gaps = nlohmann::json::array();
        for (double g : row.gaps) {
            if (std::isnan(g))
                gaps.push_back(nullptr);
            else
                gaps.push_back(g);
        }
        methods.push_back({{"name", row.name},
                           {"gap_geomean", row.gap_geomean},
                           {"mean_solve_seconds", row.mean_solve_seconds},
                           {"feasibility_rate", row.feasibility_rate},
                           {"failures", row.failures},
                           {"gaps", std::move(gaps)}});
    }
    nlohmann::json j{{"methods", std::move(methods)},
                     {"reference_makespans", report.reference_makespans},
                     {"reference_status", report.reference_status}};
    return j.dump(2);
}

} // namespace fjsp
