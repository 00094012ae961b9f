#ifndef FJSP_NEURAL_HPP
#define FJSP_NEURAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fjsp/core.hpp"
#include "fjsp/datagen.hpp"
#include "fjsp/instance_io.hpp"
#include "fjsp/rng.hpp"

namespace fjsp {

// Machine-task and job-task views of the duration matrix, normalized by the
// family-wide maximum duration. d_j carries job membership scaled by the
// task's mean compatible duration.
struct FeatureTensors {
    int num_tasks = 0;
    int num_machines = 0;
    int num_jobs = 0;
    std::vector<double> d_m;               // N x M, 0 where incompatible
    std::vector<double> d_j;               // N x J, nonzero only in the task's job column
    std::vector<std::uint8_t> compat_mask; // N x M
    double norm_scale = 1.0;
};

FeatureTensors split_features(const Instance& inst, double norm_scale);

enum class Head { AssignmentLogits, StartTimes, Joint };

struct NetworkConfig {
    Head head = Head::AssignmentLogits;
    int encoder_layers = 2; // 2 or 3
    int decoder_layers = 2; // 2 or 3
    int filters = 16;       // H
    int hidden = 64;        // decoder hidden width
    double dropout = 0.2;
    int num_tasks = 0;
    int num_machines = 0;
    int num_jobs = 0;

    bool operator==(const NetworkConfig&) const = default;
};

// Row-normalized exponentials over unmasked entries; masked entries are
// exactly zero. Throws on a fully-masked row.
std::vector<double> masked_softmax(const std::vector<double>& logits,
                                   const std::vector<std::uint8_t>& mask, int n, int m);

struct AssignmentDistribution {
    int num_tasks = 0;
    int num_machines = 0;
    std::vector<double> logits;
    std::vector<double> probs;
    std::vector<std::uint8_t> mask;
};

AssignmentDistribution make_distribution(const std::vector<double>& logits,
                                         const FeatureTensors& features);

struct LossConfig {
    double lambda = 1.0;  // constraint-regularizer weight
    double epsilon = 1e-7; // probability clamp inside logarithms
};

struct LossResult {
    double value = 0;
    std::vector<double> grad;
};

// Cross-entropy over all compatible (task, machine) entries with clamped
// probabilities; the gradient is taken with respect to the logits and is
// exact for the clamped function.
LossResult assignment_loss(const std::vector<double>& logits, const std::vector<std::uint8_t>& mask,
                           int n, int m, const Assignment& truth, const LossConfig& cfg);

// L1 distance to the optimal starts plus lambda times the job-precedence and
// machine-overlap violations of the prediction. Subgradient 0 at kinks.
LossResult scheduling_loss(const std::vector<double>& pred_starts, const std::vector<Time>& truth_starts,
                           const Assignment& a, const Instance& inst, const LossConfig& cfg);

struct BranchSet {
    std::vector<int> tasks; // N_s, ascending task ids
};

// The s tasks whose assignment distribution has the highest Shannon entropy;
// ties prefer the lower task index.
BranchSet select_branch_set(const AssignmentDistribution& dist, int s);

// The argmax assignment plus every single-task reassignment of a branch-set
// task to one of its compatible machines, duplicates removed.
std::vector<Assignment> entropy_branch(const AssignmentDistribution& dist, int s);

class Network {
public:
    Network() = default;
    Network(const NetworkConfig& cfg, double norm_scale, Rng& rng);

    const NetworkConfig& config() const { return cfg_; }
    double norm_scale() const { return norm_scale_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Deterministic in eval mode. Train mode applies dropout drawn from rng.
    // The StartTimes head requires an assignment: d_m is re-masked so only the
    // assigned machine's entry per task is visible.
    std::vector<double> forward(const FeatureTensors& f, const std::optional<Assignment>& assignment,
                                bool train_mode = false, Rng* rng = nullptr) const;

    struct Trace; // forward activations captured for backprop

    std::vector<double> forward_trace(const FeatureTensors& f,
                                      const std::optional<Assignment>& assignment, bool train_mode,
                                      Rng* rng, Trace& trace) const;
    // Accumulates d(loss)/d(params) into dparams given d(loss)/d(output).
    void backward(const Trace& trace, const std::vector<double>& doutput,
                  std::vector<double>& dparams) const;

    int output_size() const;

private:
    NetworkConfig cfg_;
    double norm_scale_ = 1.0;
    std::vector<double> params_;
};

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

enum class TrainStage { Assign, Sched, Joint };

struct TrainConfig {
    int max_epochs = 1000;
    int batch_size = 32;
    double learning_rate = 1e-2; // grid: 1e-1, 1e-2, 1e-3
    int plateau_patience = 10;   // lr /= 10 after this many stale epochs
    int early_stop_patience = 20;
    std::uint64_t rng_seed = 0;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0;
    double val_loss = 0;
    double learning_rate = 0;
};

struct TrainResult {
    Network net; // parameters with the smallest validation loss
    std::vector<EpochStats> history;
    double best_val = 0;
    int best_epoch = 0;
};

// Adam on the configured stage. Scheduling-stage records are matched to the
// split through meta.instance_index (their source record's position);
// assignment/joint stages use record positions directly.
TrainResult train(TrainStage stage, const std::vector<DatasetRecord>& records,
                  const DatasetSplit& split, const NetworkConfig& net_cfg, const TrainConfig& tc,
                  const LossConfig& lc);

struct GridOutcome {
    NetworkConfig config;
    double learning_rate = 0;
    double best_val = 0;
};

// Full Appendix-style sweep: encoder/decoder layers in {2,3} and learning
// rate in {1e-1, 1e-2, 1e-3}; returns the winner by validation loss along
// with all outcomes.
std::pair<TrainResult, std::vector<GridOutcome>> grid_search(TrainStage stage,
                                                             const std::vector<DatasetRecord>& records,
                                                             const DatasetSplit& split,
                                                             NetworkConfig net_cfg, TrainConfig tc,
                                                             const LossConfig& lc);

// Two-stage inference: assignment logits -> masked softmax -> argmax ->
// conditioned start-time regression -> ordering -> recovery. Always feasible.
Solution predict_pipeline(const Instance& inst, const Network& assign_net, const Network& sched_net);

// One-stage baseline with the Joint head.
Solution predict_one_stage(const Instance& inst, const Network& joint_net);

} // namespace fjsp

#endif // FJSP_NEURAL_HPP
