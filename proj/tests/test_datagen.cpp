#include <doctest.h>

#include <set>
#include <sstream>

#include "fjsp/datagen.hpp"
#include "fjsp/instance_io.hpp"
#include "fjsp/manifest.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

namespace {

Instance bundled_base() { return load_fjs_file(std::string(FJSP_DATA_DIR) + "/base_4x3x3.fjs"); }

SolveOptions quick() {
    SolveOptions opts;
    opts.time_limit_seconds = 30.0;
    return opts;
}

} // namespace

TEST_CASE("perturb scales only the impacted machine") {
    Instance inst = make_instance(3, {{{{2, 4}, {0, 3}}, {{2, 6}}}});
    Instance slowed = perturb(inst, 2, 1.5);
    CHECK(slowed.duration(0, 0, 2) == Time{6});
    CHECK(slowed.duration(0, 1, 2) == Time{9});
    CHECK(slowed.duration(0, 0, 0) == Time{3});
}

TEST_CASE("perturb with factor one is the identity") {
    Rng rng(12);
    Instance inst = random_instance(rng, 3, 3, 3);
    CHECK(perturb(inst, 0, 1.0) == inst);
}

TEST_CASE("perturb rounds to the nearest integer with a floor of one") {
    Instance inst = make_instance(1, {{{{0, 1}}}});
    CHECK(perturb(inst, 0, 1.4).duration(0, 0, 0) == Time{1}); // round(1.4) = 1
    Instance three = make_instance(1, {{{{0, 3}}}});
    CHECK(perturb(three, 0, 1.5).duration(0, 0, 0) == Time{5}); // round(4.5) rounds up
}

TEST_CASE("perturb rejects factors outside the slowdown range") {
    Instance inst = make_instance(1, {{{{0, 5}}}});
    CHECK_THROWS_AS(perturb(inst, 0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(perturb(inst, 0, 1.6), std::invalid_argument);
    CHECK_THROWS_AS(perturb(inst, 3, 1.2), std::invalid_argument);
}

TEST_CASE("build_reference on a single-machine base") {
    Instance inst = make_instance(1, {{{{0, 4}}}, {{{0, 2}}}});
    Solution ref = build_reference(inst, 0, quick());
    REQUIRE(ref.status == SolveStatus::Optimal);
    CHECK(ref.assignment.machine_of == std::vector<int>{0, 0});
}

TEST_CASE("reference makespan never beats the base optimum") {
    Rng rng(55);
    for (int round = 0; round < 10; ++round) {
        Instance inst = random_instance(rng, 3, 2, 3);
        Solution base_opt = solve_fjsp(inst, quick());
        Solution ref = build_reference(inst, 0, quick());
        CHECK(ref.schedule.makespan >= base_opt.schedule.makespan);
    }
}

TEST_CASE("golden reference for the bundled base") {
    Solution ref = build_reference(bundled_base(), 0, quick());
    REQUIRE(ref.status == SolveStatus::Optimal);
    CHECK(ref.schedule.makespan == 19);
    CHECK(ref.assignment.machine_of == std::vector<int>{1, 1, 0, 1, 2, 1, 2, 2, 0, 0, 0, 2});
    CHECK(ref.schedule.start == std::vector<Time>{0, 9, 15, 6, 9, 14, 0, 4, 10, 0, 4, 13});
}

TEST_CASE("split_811 is disjoint, exhaustive and remainder-to-train") {
    DatasetSplit split = split_811(1000, 7);
    CHECK(split.train.size() == 800);
    CHECK(split.validation.size() == 100);
    CHECK(split.test.size() == 100);

    DatasetSplit odd = split_811(12, 7);
    CHECK(odd.train.size() == 10);
    CHECK(odd.validation.size() == 1);
    CHECK(odd.test.size() == 1);

    std::set<int> all;
    for (int i : split.train) all.insert(i);
    for (int i : split.validation) all.insert(i);
    for (int i : split.test) all.insert(i);
    CHECK(all.size() == 1000);
    CHECK(*all.begin() == 0);
    CHECK(*all.rbegin() == 999);
}

TEST_CASE("pinned factor with the base optimum as reference keeps distance zero") {
    Instance base = bundled_base();
    Solution base_opt = build_reference(base, 0, quick(), 0.0); // no delay: the base optimum
    PerturbSpec spec;
    spec.impacted_machine = 0;
    spec.factor_lo = spec.factor_hi = 1.0;
    spec.count = 1;
    spec.rng_seed = 5;
    auto gen = generate_dataset(base, spec, quick(), base_opt, 1);
    REQUIRE(gen.records.size() == 1);
    CHECK(gen.records[0].assignment == base_opt.assignment.machine_of);
    CHECK(gen.records[0].makespan == base_opt.schedule.makespan);
}

TEST_CASE("datasets are byte-identical across runs and worker counts") {
    Instance base = bundled_base();
    Solution ref = build_reference(base, 0, quick());
    PerturbSpec spec;
    spec.impacted_machine = 0;
    spec.count = 10;
    spec.rng_seed = 99;

    std::string serialized[3];
    const int workers[3] = {1, 4, 1};
    for (int k = 0; k < 3; ++k) {
        auto gen = generate_dataset(base, spec, quick(), ref, workers[k]);
        std::ostringstream out;
        write_dataset(gen.records, out);
        serialized[k] = out.str();
        CHECK(gen.split == split_811(static_cast<int>(gen.records.size()), spec.rng_seed));
    }
    CHECK(serialized[0] == serialized[1]);
    CHECK(serialized[0] == serialized[2]);
}

TEST_CASE("golden dataset checksum for the bundled base") {
    Instance base = bundled_base();
    Solution ref = build_reference(base, 0, quick());
    PerturbSpec spec;
    spec.impacted_machine = 0;
    spec.count = 200;
    spec.rng_seed = 42;
    auto gen = generate_dataset(base, spec, quick(), ref, 4);
    REQUIRE(gen.records.size() == 200);
    CHECK(gen.failures == 0);
    std::ostringstream out;
    write_dataset(gen.records, out);
    CHECK(fnv1a64_hex(out.str()) == "381f76f569c589db");
}

TEST_CASE("every emitted record passes strict validation and stays optimal") {
    Instance base = bundled_base();
    Solution ref = build_reference(base, 0, quick());
    PerturbSpec spec;
    spec.impacted_machine = 0;
    spec.count = 15;
    spec.rng_seed = 3;
    auto gen = generate_dataset(base, spec, quick(), ref, 2);

    std::ostringstream out;
    write_dataset(gen.records, out);
    std::istringstream in(out.str());
    auto loaded = read_dataset(in, true); // strict revalidation
    CHECK(loaded.size() == gen.records.size());

    for (const auto& rec : gen.records) {
        Instance inst = record_instance(rec);
        Solution plain = solve_fjsp(inst, quick());
        CHECK(rec.makespan == plain.schedule.makespan); // symmetry breaking conserves the optimum
    }
}

TEST_CASE("augment keeps ground truth, dedups and caps") {
    Instance base = bundled_base();
    Solution ref = build_reference(base, 0, quick());
    PerturbSpec spec;
    spec.impacted_machine = 0;
    spec.count = 6;
    spec.rng_seed = 17;
    auto gen = generate_dataset(base, spec, quick(), ref, 1);
    REQUIRE(gen.records.size() == 6);

    AugmentOptions aopts;
    aopts.reference_starts = ref.schedule.start;
    aopts.cap = 100;
    aopts.rng_seed = 5;

    SUBCASE("no candidates: ground truth only") {
        auto aug = augment_scheduling_dataset(gen.records, {}, aopts, quick());
        CHECK(aug.records.size() == 6);
        for (const auto& rec : aug.records) CHECK(rec.meta.origin == "ground_truth");
    }

    SUBCASE("duplicate of ground truth is removed") {
        std::vector<SchedulingCandidate> cands{{0, Assignment{gen.records[0].assignment}}};
        auto aug = augment_scheduling_dataset(gen.records, cands, aopts, quick());
        CHECK(aug.records.size() == 6);
    }

    SUBCASE("cap bounds the branched extras deterministically") {
        std::vector<SchedulingCandidate> cands;
        // flip task 0 across its compatible machines on every instance
        for (int i = 0; i < 6; ++i) {
            Instance inst = record_instance(gen.records[static_cast<std::size_t>(i)]);
            for (const auto& opt : inst.options_flat(0)) {
                Assignment a{gen.records[static_cast<std::size_t>(i)].assignment};
                a.machine_of[0] = opt.machine;
                cands.push_back({i, a});
            }
        }
        aopts.cap = 8;
        auto aug1 = augment_scheduling_dataset(gen.records, cands, aopts, quick());
        CHECK(aug1.records.size() == 8); // 6 ground truth + 2 sampled extras
        auto aug2 = augment_scheduling_dataset(gen.records, cands, aopts, quick());
        std::ostringstream s1, s2;
        write_dataset(aug1.records, s1);
        write_dataset(aug2.records, s2);
        CHECK(s1.str() == s2.str());
    }

    SUBCASE("scheduling labels are the induced JSP optimum") {
        auto aug = augment_scheduling_dataset(gen.records, {}, aopts, quick());
        for (const auto& rec : aug.records) {
            Instance inst = record_instance(rec);
            CHECK(rec.makespan == oracle_jsp_optimum(induce_jsp(inst, Assignment{rec.assignment})));
            Schedule sched{rec.starts, rec.makespan};
            CHECK(check_feasibility(inst, Assignment{rec.assignment}, sched).total == 0);
        }
    }
}
