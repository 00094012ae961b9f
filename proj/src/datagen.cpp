#include "fjsp/datagen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fjsp/rng.hpp"
#include "fjsp/worker_pool.hpp"

namespace fjsp {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

} // namespace

DatasetSplit split_811(int count, std::uint64_t rng_seed) {
    std::vector<int> indices(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) indices[static_cast<std::size_t>(i)] = i;
    Rng rng(rng_seed ^ 0x8111a7e5ULL);
    rng.shuffle(indices);

    const int n_val = count / 10;
    const int n_test = count / 10;
    DatasetSplit split;
    split.test.assign(indices.begin(), indices.begin() + n_test);
    split.validation.assign(indices.begin() + n_test, indices.begin() + n_test + n_val);
    split.train.assign(indices.begin() + n_test + n_val, indices.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

Instance perturb(const Instance& base, int machine, double factor) {
    if (factor < 1.0 || factor > 1.5)
        throw std::invalid_argument("slowdown factor " + std::to_string(factor) + " outside [1.0, 1.5]");
    if (machine < 0 || machine >= base.num_machines())
        throw std::invalid_argument("impacted machine out of range");

    std::vector<std::vector<std::vector<MachineOption>>> jobs;
    jobs.reserve(static_cast<std::size_t>(base.num_jobs()));
    for (int j = 0; j < base.num_jobs(); ++j) {
        std::vector<std::vector<MachineOption>> tasks;
        for (int t = 0; t < base.num_tasks(j); ++t) {
            std::vector<MachineOption> opts = base.options(j, t);
            for (auto& opt : opts)
                if (opt.machine == machine)
                    opt.duration = std::max<Time>(
                        1, std::llround(static_cast<double>(opt.duration) * factor));
            tasks.push_back(std::move(opts));
        }
        jobs.push_back(std::move(tasks));
    }
    return Instance(base.num_machines(), std::move(jobs));
}

Solution build_reference(const Instance& base, int machine, const SolveOptions& opts,
                         double reference_delay) {
    Instance delayed = perturb(base, machine, 1.0 + reference_delay);
    SolveOptions plain = opts;
    plain.mode = SolveMode::Makespan;
    return solve_fjsp(delayed, plain);
}

GenerationResult generate_dataset(const Instance& base, const PerturbSpec& spec,
                                  const SolveOptions& opts, const Solution& reference, int workers) {
    if (reference.status == SolveStatus::Unsolved)
        throw std::invalid_argument("generate_dataset requires a solved reference");

    // All randomness is drawn up front, in draw order, so worker scheduling
    // cannot perturb it.
    std::vector<double> factors(static_cast<std::size_t>(spec.count));
    std::vector<int> machines(static_cast<std::size_t>(spec.count), spec.impacted_machine);
    {
        Rng rng(spec.rng_seed);
        for (int i = 0; i < spec.count; ++i) {
            // factor in (lo, hi]
            factors[static_cast<std::size_t>(i)] =
                spec.factor_hi - (spec.factor_hi - spec.factor_lo) * rng.uniform01();
            if (spec.vary_machine)
                machines[static_cast<std::size_t>(i)] =
                    static_cast<int>(rng.below(static_cast<std::uint64_t>(base.num_machines())));
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::optional<DatasetRecord>> slots(static_cast<std::size_t>(spec.count));
    run_pool(workers, spec.count, [&](int i) {
        const double factor = factors[static_cast<std::size_t>(i)];
        const int machine = machines[static_cast<std::size_t>(i)];
        Instance inst = perturb(base, machine, factor);

        Solution plain = solve_fjsp(inst, opts);
        if (plain.status != SolveStatus::Optimal) return;

        Solution labeled = plain;
        if (spec.symmetry_break) {
            SymmetryBreakGoal goal{reference.assignment, reference.schedule.start,
                                   plain.schedule.makespan};
            labeled = solve_symmetry_breaking(inst, goal, opts);
            if (labeled.status != SolveStatus::Optimal) return;
        }

        DatasetMeta meta;
        meta.impacted_machine = machine;
        meta.factor = factor;
        meta.status = to_string(labeled.status);
        meta.solve_seconds = 0.0;
        meta.instance_index = i;
        meta.origin = "ground_truth";
        slots[static_cast<std::size_t>(i)] = make_record(inst, labeled, std::move(meta));
    });

    GenerationResult result;
    result.solve_seconds = elapsed_seconds(t0);
    for (auto& slot : slots) {
        if (slot)
            result.records.push_back(std::move(*slot));
        else
            ++result.failures;
    }
    result.split = split_811(static_cast<int>(result.records.size()), spec.rng_seed);
    return result;
}

AugmentResult augment_scheduling_dataset(const std::vector<DatasetRecord>& records,
                                         const std::vector<SchedulingCandidate>& candidates,
                                         const AugmentOptions& aopts, const SolveOptions& sopts) {
    struct Item {
        int instance_index;
        Assignment assignment;
        bool ground_truth;
    };

    std::vector<Item> items;
    std::set<std::pair<int, std::vector<int>>> seen;
    for (int i = 0; i < static_cast<int>(records.size()); ++i) {
        Assignment a{records[static_cast<std::size_t>(i)].assignment};
        seen.insert({i, a.machine_of});
        items.push_back({i, std::move(a), true});
    }
    std::vector<Item> extras;
    for (const auto& cand : candidates) {
        if (cand.instance_index < 0 || cand.instance_index >= static_cast<int>(records.size()))
            throw std::invalid_argument("candidate instance index out of range");
        if (!seen.insert({cand.instance_index, cand.assignment.machine_of}).second) continue;
        extras.push_back({cand.instance_index, cand.assignment, false});
    }

    // Ground truth is always kept; branched extras fill up to the cap.
    const int room = std::max(0, aopts.cap - static_cast<int>(items.size()));
    if (static_cast<int>(extras.size()) > room) {
        Rng rng(aopts.rng_seed ^ 0xa0600000ULL);
        rng.shuffle(extras);
        extras.resize(static_cast<std::size_t>(room));
    }
    items.insert(items.end(), extras.begin(), extras.end());
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.instance_index != b.instance_index) return a.instance_index < b.instance_index;
        if (a.ground_truth != b.ground_truth) return a.ground_truth;
        return a.assignment.machine_of < b.assignment.machine_of;
    });

    const auto t0 = std::chrono::steady_clock::now();
    const int count = static_cast<int>(items.size());
    std::vector<std::optional<DatasetRecord>> slots(static_cast<std::size_t>(count));
    run_pool(aopts.workers, count, [&](int k) {
        const Item& item = items[static_cast<std::size_t>(k)];
        const DatasetRecord& src = records[static_cast<std::size_t>(item.instance_index)];
        Instance inst = record_instance(src);
        if (check_assignment(inst, item.assignment)) return; // incompatible candidate
        JspView view = induce_jsp(inst, item.assignment);

        Solution plain = solve_jsp(view, sopts);
        if (plain.status != SolveStatus::Optimal) return;

        Solution labeled = plain;
        if (aopts.reference_starts) {
            SymmetryBreakGoal goal{item.assignment, aopts.reference_starts, plain.schedule.makespan};
            labeled = solve_jsp(view, sopts, goal);
            if (labeled.status != SolveStatus::Optimal) return;
        }

        DatasetMeta meta;
        meta.impacted_machine = src.meta.impacted_machine;
        meta.factor = src.meta.factor;
        meta.status = to_string(labeled.status);
        meta.solve_seconds = 0.0;
        meta.instance_index = item.instance_index;
        meta.origin = item.ground_truth ? "ground_truth" : "branch";
        slots[static_cast<std::size_t>(k)] = make_record(inst, labeled, std::move(meta));
    });

    AugmentResult result;
    result.solve_seconds = elapsed_seconds(t0);
    for (auto& slot : slots) {
        if (slot)
            result.records.push_back(std::move(*slot));
        else
            ++result.failures;
    }
    return result;
}

} // namespace fjsp
