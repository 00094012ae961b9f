#include "fjsp/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "fjsp/recovery.hpp"

namespace fjsp {

FeatureTensors split_features(const Instance& inst, double norm_scale) {
    if (norm_scale <= 0) throw std::invalid_argument("norm_scale must be positive");
    FeatureTensors f;
    f.num_tasks = inst.total_tasks();
    f.num_machines = inst.num_machines();
    f.num_jobs = inst.num_jobs();
    f.norm_scale = norm_scale;
    f.d_m.assign(static_cast<std::size_t>(f.num_tasks) * f.num_machines, 0.0);
    f.compat_mask.assign(static_cast<std::size_t>(f.num_tasks) * f.num_machines, 0);
    f.d_j.assign(static_cast<std::size_t>(f.num_tasks) * f.num_jobs, 0.0);
    for (int i = 0; i < f.num_tasks; ++i) {
        auto [job, task] = inst.job_task(i);
        double sum = 0;
        for (const auto& opt : inst.options_flat(i)) {
            f.d_m[static_cast<std::size_t>(i) * f.num_machines + opt.machine] =
                static_cast<double>(opt.duration) / norm_scale;
            f.compat_mask[static_cast<std::size_t>(i) * f.num_machines + opt.machine] = 1;
            sum += static_cast<double>(opt.duration);
        }
        const double mean = sum / static_cast<double>(inst.options_flat(i).size());
        f.d_j[static_cast<std::size_t>(i) * f.num_jobs + job] = mean / norm_scale;
    }
    return f;
}

std::vector<double> masked_softmax(const std::vector<double>& logits,
                                   const std::vector<std::uint8_t>& mask, int n, int m) {
    if (static_cast<int>(logits.size()) != n * m || static_cast<int>(mask.size()) != n * m)
        throw std::invalid_argument("masked_softmax shape mismatch");
    std::vector<double> probs(logits.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * m;
        double hi = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < m; ++k)
            if (mask[row + k]) hi = std::max(hi, logits[row + k]);
        if (!std::isfinite(hi)) throw std::invalid_argument("fully masked row " + std::to_string(i));
        double denom = 0;
        for (int k = 0; k < m; ++k)
            if (mask[row + k]) denom += std::exp(logits[row + k] - hi);
        for (int k = 0; k < m; ++k)
            if (mask[row + k]) probs[row + k] = std::exp(logits[row + k] - hi) / denom;
    }
    return probs;
}

AssignmentDistribution make_distribution(const std::vector<double>& logits,
                                         const FeatureTensors& features) {
    AssignmentDistribution dist;
    dist.num_tasks = features.num_tasks;
    dist.num_machines = features.num_machines;
    dist.logits = logits;
    dist.mask = features.compat_mask;
    dist.probs = masked_softmax(logits, dist.mask, dist.num_tasks, dist.num_machines);
    return dist;
}

LossResult assignment_loss(const std::vector<double>& logits, const std::vector<std::uint8_t>& mask,
                           int n, int m, const Assignment& truth, const LossConfig& cfg) {
    const std::vector<double> probs = masked_softmax(logits, mask, n, m);
    LossResult result;
    result.grad.assign(logits.size(), 0.0);

    const double eps = cfg.epsilon;
    for (int i = 0; i < n; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * m;
        // d(loss)/d(prob), zero where clamped or masked
        std::vector<double> dprob(static_cast<std::size_t>(m), 0.0);
        double dot = 0; // sum_k dL/dz_k * p_k for the softmax Jacobian
        for (int k = 0; k < m; ++k) {
            if (!mask[row + k]) continue;
            const double z = truth.machine_of[i] == k ? 1.0 : 0.0;
            const double p = probs[row + k];
            const double pc = std::clamp(p, eps, 1.0 - eps);
            result.value -= z * std::log(pc) + (1.0 - z) * std::log(1.0 - pc);
            if (p > eps && p < 1.0 - eps) dprob[static_cast<std::size_t>(k)] = -(z / pc - (1.0 - z) / (1.0 - pc));
        }
        for (int k = 0; k < m; ++k)
            if (mask[row + k]) dot += dprob[static_cast<std::size_t>(k)] * probs[row + k];
        for (int k = 0; k < m; ++k)
            if (mask[row + k])
                result.grad[row + k] = probs[row + k] * (dprob[static_cast<std::size_t>(k)] - dot);
    }
    return result;
}

LossResult scheduling_loss(const std::vector<double>& pred_starts, const std::vector<Time>& truth_starts,
                           const Assignment& a, const Instance& inst, const LossConfig& cfg) {
    const int n = inst.total_tasks();
    if (static_cast<int>(pred_starts.size()) != n || static_cast<int>(truth_starts.size()) != n)
        throw std::invalid_argument("scheduling_loss start vectors have wrong size");

    LossResult result;
    result.grad.assign(pred_starts.size(), 0.0);

    for (int i = 0; i < n; ++i) {
        const double diff = pred_starts[i] - static_cast<double>(truth_starts[i]);
        result.value += std::abs(diff);
        if (diff > 0)
            result.grad[i] += 1;
        else if (diff < 0)
            result.grad[i] -= 1;
    }

    std::vector<Time> dur(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto [j, t] = inst.job_task(i);
        dur[static_cast<std::size_t>(i)] = *inst.duration(j, t, a.machine_of[i]);
    }

    const double lambda = cfg.lambda;
    for (int j = 0; j < inst.num_jobs(); ++j) {
        for (int t = 0; t + 1 < inst.num_tasks(j); ++t) {
            const int u = inst.task_id(j, t);
            const int v = inst.task_id(j, t + 1);
            const double overrun = pred_starts[u] + static_cast<double>(dur[u]) - pred_starts[v];
            if (overrun > 0) {
                result.value += lambda * overrun;
                result.grad[u] += lambda;
                result.grad[v] -= lambda;
            }
        }
    }
    for (int u = 0; u < n; ++u) {
        auto [ju, tu] = inst.job_task(u);
        for (int v = u + 1; v < n; ++v) {
            auto [jv, tv] = inst.job_task(v);
            if (ju == jv || a.machine_of[u] != a.machine_of[v]) continue;
            const double left = std::max(0.0, pred_starts[v] + static_cast<double>(dur[v]) - pred_starts[u]);
            const double right = std::max(0.0, pred_starts[u] + static_cast<double>(dur[u]) - pred_starts[v]);
            result.value += lambda * std::min(left, right);
            if (left < right && left > 0) {
                result.grad[v] += lambda;
                result.grad[u] -= lambda;
            } else if (right < left && right > 0) {
                result.grad[u] += lambda;
                result.grad[v] -= lambda;
            }
            // left == right is a kink: subgradient 0
        }
    }
    return result;
}

BranchSet select_branch_set(const AssignmentDistribution& dist, int s) {
    const int n = dist.num_tasks;
    const int m = dist.num_machines;
    if (s > n) throw std::invalid_argument("branch set larger than task count");
    std::vector<std::pair<double, int>> entropy(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double h = 0;
        for (int k = 0; k < m; ++k) {
            const double p = dist.probs[static_cast<std::size_t>(i) * m + k];
            if (p > 0) h -= p * std::log(p);
        }
        entropy[static_cast<std::size_t>(i)] = {h, i};
    }
    std::stable_sort(entropy.begin(), entropy.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    BranchSet set;
    for (int i = 0; i < s; ++i) set.tasks.push_back(entropy[static_cast<std::size_t>(i)].second);
    std::sort(set.tasks.begin(), set.tasks.end());
    return set;
}

namespace {

Assignment argmax_assignment(const AssignmentDistribution& dist) {
    Assignment a;
    a.machine_of.assign(static_cast<std::size_t>(dist.num_tasks), -1);
    for (int i = 0; i < dist.num_tasks; ++i) {
        double best = -1;
        for (int k = 0; k < dist.num_machines; ++k) {
            const std::size_t at = static_cast<std::size_t>(i) * dist.num_machines + k;
            if (dist.mask[at] && dist.probs[at] > best) { // ties keep the lowest machine id
                best = dist.probs[at];
                a.machine_of[static_cast<std::size_t>(i)] = k;
            }
        }
    }
    return a;
}

} // namespace

std::vector<Assignment> entropy_branch(const AssignmentDistribution& dist, int s) {
    const Assignment base = argmax_assignment(dist);
    std::vector<Assignment> out{base};
    std::set<std::vector<int>> seen{base.machine_of};
    for (int task : select_branch_set(dist, s).tasks) {
        for (int k = 0; k < dist.num_machines; ++k) {
            if (!dist.mask[static_cast<std::size_t>(task) * dist.num_machines + k]) continue;
            Assignment candidate = base;
            candidate.machine_of[static_cast<std::size_t>(task)] = k;
            if (seen.insert(candidate.machine_of).second) out.push_back(std::move(candidate));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Network: two 1-D convolution encoders (machine axis and job axis, kernel 3,
// same padding, tanh) mean-pooled to H features per task, concatenated,
// flattened, and decoded by an MLP with dropout on the hidden layers.
// ---------------------------------------------------------------------------

namespace {

struct ParamLayout {
    struct Block {
        int offset;
        int out_channels, in_channels; // conv: filters/channels, linear: rows/cols
        int weight_count;
        int bias_count;
    };
    std::vector<Block> enc_m;
    std::vector<Block> enc_j;
    std::vector<Block> dec;
    int total = 0;
};

ParamLayout make_layout(const NetworkConfig& cfg) {
    ParamLayout layout;
    int at = 0;
    auto conv_block = [&](int c_in, int c_out) {
        ParamLayout::Block b{at, c_out, c_in, c_out * c_in * 3, c_out};
        at += b.weight_count + b.bias_count;
        return b;
    };
    auto linear_block = [&](int in, int out) {
        ParamLayout::Block b{at, out, in, out * in, out};
        at += b.weight_count + b.bias_count;
        return b;
    };
    for (int l = 0; l < cfg.encoder_layers; ++l)
        layout.enc_m.push_back(conv_block(l == 0 ? 1 : cfg.filters, cfg.filters));
    for (int l = 0; l < cfg.encoder_layers; ++l)
        layout.enc_j.push_back(conv_block(l == 0 ? 1 : cfg.filters, cfg.filters));

    int out_size = 0;
    switch (cfg.head) {
        case Head::AssignmentLogits: out_size = cfg.num_tasks * cfg.num_machines; break;
        case Head::StartTimes: out_size = cfg.num_tasks; break;
        case Head::Joint: out_size = cfg.num_tasks * cfg.num_machines + cfg.num_tasks; break;
    }
    std::vector<int> dims{cfg.num_tasks * 2 * cfg.filters};
    for (int l = 0; l + 1 < cfg.decoder_layers; ++l) dims.push_back(cfg.hidden);
    dims.push_back(out_size);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
        layout.dec.push_back(linear_block(dims[l], dims[l + 1]));
    layout.total = at;
    return layout;
}

// conv over one signal: in (c_in x len) -> out (c_out x len), kernel 3, zero pad
void conv1d_forward(const double* weights, const double* bias, const double* in, double* out,
                    int c_in, int c_out, int len) {
    for (int c = 0; c < c_out; ++c) {
        for (int p = 0; p < len; ++p) {
            double acc = bias[c];
            for (int ci = 0; ci < c_in; ++ci) {
                const double* wrow = weights + (c * c_in + ci) * 3;
                const double* irow = in + ci * len;
                if (p > 0) acc += wrow[0] * irow[p - 1];
                acc += wrow[1] * irow[p];
                if (p + 1 < len) acc += wrow[2] * irow[p + 1];
            }
            out[c * len + p] = std::tanh(acc);
        }
    }
}

// dout is d(loss)/d(post-tanh output); accumulates into dweights/dbias/din
void conv1d_backward(const double* weights, const double* in, const double* out, const double* dout,
                     double* dweights, double* dbias, double* din, int c_in, int c_out, int len) {
    for (int c = 0; c < c_out; ++c) {
        for (int p = 0; p < len; ++p) {
            const double y = out[c * len + p];
            const double dz = dout[c * len + p] * (1.0 - y * y);
            dbias[c] += dz;
            for (int ci = 0; ci < c_in; ++ci) {
                double* dwrow = dweights + (c * c_in + ci) * 3;
                const double* wrow = weights + (c * c_in + ci) * 3;
                const double* irow = in + ci * len;
                double* dirow = din ? din + ci * len : nullptr;
                if (p > 0) {
                    dwrow[0] += irow[p - 1] * dz;
                    if (dirow) dirow[p - 1] += wrow[0] * dz;
                }
                dwrow[1] += irow[p] * dz;
                if (dirow) dirow[p] += wrow[1] * dz;
                if (p + 1 < len) {
                    dwrow[2] += irow[p + 1] * dz;
                    if (dirow) dirow[p + 1] += wrow[2] * dz;
                }
            }
        }
    }
}

} // namespace

struct Network::Trace {
    std::vector<double> input_m; // N x 1 x M after optional assignment masking
    std::vector<double> input_j; // N x 1 x J
    std::vector<std::vector<double>> enc_m_acts;
    std::vector<std::vector<double>> enc_j_acts;
    std::vector<double> pooled; // decoder input, per task [h_j ; h_m]
    std::vector<std::vector<double>> dec_inputs;
    std::vector<std::vector<double>> dec_tanh;     // post-tanh hidden outputs
    std::vector<std::vector<double>> dropout_mask; // scaled keep masks per hidden layer
    std::vector<double> output;
};

Network::Network(const NetworkConfig& cfg, double norm_scale, Rng& rng)
    : cfg_(cfg), norm_scale_(norm_scale) {
    if (cfg.num_tasks <= 0 || cfg.num_machines <= 0 || cfg.num_jobs <= 0)
        throw std::invalid_argument("network dimensions must be bound before construction");
    ParamLayout layout = make_layout(cfg_);
    params_.assign(static_cast<std::size_t>(layout.total), 0.0);
    auto init_block = [&](const ParamLayout::Block& b, int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (int i = 0; i < b.weight_count; ++i)
            params_[static_cast<std::size_t>(b.offset + i)] = (rng.uniform01() * 2.0 - 1.0) * limit;
    };
    for (const auto& b : layout.enc_m) init_block(b, b.in_channels * 3, b.out_channels * 3);
    for (const auto& b : layout.enc_j) init_block(b, b.in_channels * 3, b.out_channels * 3);
    for (const auto& b : layout.dec) init_block(b, b.in_channels, b.out_channels);
}

int Network::output_size() const {
    switch (cfg_.head) {
        case Head::AssignmentLogits: return cfg_.num_tasks * cfg_.num_machines;
        case Head::StartTimes: return cfg_.num_tasks;
        case Head::Joint: return cfg_.num_tasks * cfg_.num_machines + cfg_.num_tasks;
    }
    return 0;
}

std::vector<double> Network::forward_trace(const FeatureTensors& f,
                                           const std::optional<Assignment>& assignment,
                                           bool train_mode, Rng* rng, Trace& trace) const {
    const int n = cfg_.num_tasks;
    const int m = cfg_.num_machines;
    const int jobs = cfg_.num_jobs;
    const int h = cfg_.filters;
    if (f.num_tasks != n || f.num_machines != m || f.num_jobs != jobs)
        throw std::invalid_argument("feature tensors do not match the network dimensions");
    if (cfg_.head == Head::StartTimes && !assignment)
        throw std::invalid_argument("start-time head requires an assignment");
    if (train_mode && cfg_.dropout > 0 && !rng)
        throw std::invalid_argument("train-mode forward requires an rng for dropout");

    const ParamLayout layout = make_layout(cfg_);
    const double* p = params_.data();

    trace.input_m = f.d_m;
    if (assignment && cfg_.head != Head::Joint) {
        // Condition on the machine choice: keep only the assigned machine's
        // normalized duration per task, like the induced JSP the head learns.
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < m; ++k)
                if (k != assignment->machine_of[static_cast<std::size_t>(i)])
                    trace.input_m[static_cast<std::size_t>(i) * m + k] = 0.0;
    }
    trace.input_j = f.d_j;

    auto run_encoder = [&](const std::vector<ParamLayout::Block>& blocks, const std::vector<double>& input,
                           std::vector<std::vector<double>>& acts, int len) {
        acts.clear();
        const std::vector<double>* cur = &input;
        int c_in = 1;
        for (const auto& b : blocks) {
            std::vector<double> next(static_cast<std::size_t>(n) * h * len);
            for (int i = 0; i < n; ++i)
                conv1d_forward(p + b.offset, p + b.offset + b.weight_count,
                               cur->data() + static_cast<std::size_t>(i) * c_in * len,
                               next.data() + static_cast<std::size_t>(i) * h * len, c_in, h, len);
            acts.push_back(std::move(next));
            cur = &acts.back();
            c_in = h;
        }
    };
    run_encoder(layout.enc_m, trace.input_m, trace.enc_m_acts, m);
    run_encoder(layout.enc_j, trace.input_j, trace.enc_j_acts, jobs);

    // Mean-pool each encoder over its axis, concat [h_j ; h_m] per task.
    trace.pooled.assign(static_cast<std::size_t>(n) * 2 * h, 0.0);
    const auto& top_m = trace.enc_m_acts.back();
    const auto& top_j = trace.enc_j_acts.back();
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < h; ++c) {
            double sum_j = 0, sum_m = 0;
            for (int q = 0; q < jobs; ++q) sum_j += top_j[(static_cast<std::size_t>(i) * h + c) * jobs + q];
            for (int q = 0; q < m; ++q) sum_m += top_m[(static_cast<std::size_t>(i) * h + c) * m + q];
            trace.pooled[static_cast<std::size_t>(i) * 2 * h + c] = sum_j / jobs;
            trace.pooled[static_cast<std::size_t>(i) * 2 * h + h + c] = sum_m / m;
        }
    }

    trace.dec_inputs.clear();
    trace.dec_tanh.clear();
    trace.dropout_mask.clear();
    std::vector<double> cur = trace.pooled;
    for (std::size_t l = 0; l < layout.dec.size(); ++l) {
        const auto& b = layout.dec[l];
        trace.dec_inputs.push_back(cur);
        std::vector<double> next(static_cast<std::size_t>(b.out_channels));
        for (int r = 0; r < b.out_channels; ++r) {
            double acc = p[static_cast<std::size_t>(b.offset + b.weight_count + r)];
            const double* wrow = p + b.offset + static_cast<std::size_t>(r) * b.in_channels;
            for (int c = 0; c < b.in_channels; ++c) acc += wrow[c] * cur[static_cast<std::size_t>(c)];
            next[static_cast<std::size_t>(r)] = acc;
        }
        if (l + 1 < layout.dec.size()) {
            for (double& x : next) x = std::tanh(x);
            trace.dec_tanh.push_back(next);
            std::vector<double> keep(next.size(), 1.0);
            if (train_mode && cfg_.dropout > 0) {
                const double scale = 1.0 / (1.0 - cfg_.dropout);
                for (auto& kmask : keep) kmask = rng->uniform01() < cfg_.dropout ? 0.0 : scale;
                for (std::size_t i = 0; i < next.size(); ++i) next[i] *= keep[i];
            }
            trace.dropout_mask.push_back(std::move(keep));
        }
        cur = std::move(next);
    }
    trace.output = cur;
    return cur;
}

std::vector<double> Network::forward(const FeatureTensors& f, const std::optional<Assignment>& assignment,
                                     bool train_mode, Rng* rng) const {
    Trace trace;
    return forward_trace(f, assignment, train_mode, rng, trace);
}

void Network::backward(const Trace& trace, const std::vector<double>& doutput,
                       std::vector<double>& dparams) const {
    const int n = cfg_.num_tasks;
    const int m = cfg_.num_machines;
    const int jobs = cfg_.num_jobs;
    const int h = cfg_.filters;
    const ParamLayout layout = make_layout(cfg_);
    const double* p = params_.data();
    if (dparams.size() != params_.size()) dparams.assign(params_.size(), 0.0);

    // Decoder, in reverse.
    std::vector<double> d = doutput;
    for (int l = static_cast<int>(layout.dec.size()) - 1; l >= 0; --l) {
        const auto& b = layout.dec[static_cast<std::size_t>(l)];
        if (l + 1 < static_cast<int>(layout.dec.size())) {
            const auto& keep = trace.dropout_mask[static_cast<std::size_t>(l)];
            const auto& tanh_out = trace.dec_tanh[static_cast<std::size_t>(l)];
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] *= keep[i];
                d[i] *= 1.0 - tanh_out[i] * tanh_out[i];
            }
        }
        const auto& in = trace.dec_inputs[static_cast<std::size_t>(l)];
        std::vector<double> din(in.size(), 0.0);
        for (int r = 0; r < b.out_channels; ++r) {
            const double dz = d[static_cast<std::size_t>(r)];
            dparams[static_cast<std::size_t>(b.offset + b.weight_count + r)] += dz;
            double* dwrow = dparams.data() + b.offset + static_cast<std::size_t>(r) * b.in_channels;
            const double* wrow = p + b.offset + static_cast<std::size_t>(r) * b.in_channels;
            for (int c = 0; c < b.in_channels; ++c) {
                dwrow[c] += in[static_cast<std::size_t>(c)] * dz;
                din[static_cast<std::size_t>(c)] += wrow[c] * dz;
            }
        }
        d = std::move(din);
    }

    // Un-pool into the top encoder activations.
    std::vector<double> d_top_m(static_cast<std::size_t>(n) * h * m, 0.0);
    std::vector<double> d_top_j(static_cast<std::size_t>(n) * h * jobs, 0.0);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < h; ++c) {
            const double dj = d[static_cast<std::size_t>(i) * 2 * h + c] / jobs;
            const double dm = d[static_cast<std::size_t>(i) * 2 * h + h + c] / m;
            for (int q = 0; q < jobs; ++q) d_top_j[(static_cast<std::size_t>(i) * h + c) * jobs + q] = dj;
            for (int q = 0; q < m; ++q) d_top_m[(static_cast<std::size_t>(i) * h + c) * m + q] = dm;
        }

    auto run_encoder_backward = [&](const std::vector<ParamLayout::Block>& blocks,
                                    const std::vector<double>& input,
                                    const std::vector<std::vector<double>>& acts,
                                    std::vector<double> dtop, int len) {
        for (int l = static_cast<int>(blocks.size()) - 1; l >= 0; --l) {
            const auto& b = blocks[static_cast<std::size_t>(l)];
            const int c_in = b.in_channels;
            const std::vector<double>& in = l == 0 ? input : acts[static_cast<std::size_t>(l - 1)];
            const std::vector<double>& out = acts[static_cast<std::size_t>(l)];
            std::vector<double> din;
            if (l > 0) din.assign(static_cast<std::size_t>(n) * c_in * len, 0.0);
            for (int i = 0; i < n; ++i)
                conv1d_backward(p + b.offset, in.data() + static_cast<std::size_t>(i) * c_in * len,
                                out.data() + static_cast<std::size_t>(i) * h * len,
                                dtop.data() + static_cast<std::size_t>(i) * h * len,
                                dparams.data() + b.offset, dparams.data() + b.offset + b.weight_count,
                                l > 0 ? din.data() + static_cast<std::size_t>(i) * c_in * len : nullptr,
                                c_in, h, len);
            dtop = std::move(din);
        }
    };
    run_encoder_backward(layout.enc_m, trace.input_m, trace.enc_m_acts, std::move(d_top_m), m);
    run_encoder_backward(layout.enc_j, trace.input_j, trace.enc_j_acts, std::move(d_top_j), jobs);
}

// ---------------------------------------------------------------------------
// Checkpoints: magic, config, norm scale, raw little-endian doubles.
// ---------------------------------------------------------------------------

namespace {
constexpr char kMagic[8] = {'F', 'J', 'S', 'P', 'N', 'N', '0', '1'};

template <class T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}
template <class T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}
} // namespace

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    const NetworkConfig& c = net.config();
    write_pod(out, static_cast<std::int32_t>(c.head));
    write_pod(out, static_cast<std::int32_t>(c.encoder_layers));
    write_pod(out, static_cast<std::int32_t>(c.decoder_layers));
    write_pod(out, static_cast<std::int32_t>(c.filters));
    write_pod(out, static_cast<std::int32_t>(c.hidden));
    write_pod(out, c.dropout);
    write_pod(out, static_cast<std::int32_t>(c.num_tasks));
    write_pod(out, static_cast<std::int32_t>(c.num_machines));
    write_pod(out, static_cast<std::int32_t>(c.num_jobs));
    write_pod(out, net.norm_scale());
    write_pod(out, static_cast<std::uint64_t>(net.params().size()));
    out.write(reinterpret_cast<const char*>(net.params().data()),
              static_cast<std::streamsize>(net.params().size() * sizeof(double)));
}

Network load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a network checkpoint: " + path);
    NetworkConfig c;
    c.head = static_cast<Head>(read_pod<std::int32_t>(in));
    c.encoder_layers = read_pod<std::int32_t>(in);
    c.decoder_layers = read_pod<std::int32_t>(in);
    c.filters = read_pod<std::int32_t>(in);
    c.hidden = read_pod<std::int32_t>(in);
    c.dropout = read_pod<double>(in);
    c.num_tasks = read_pod<std::int32_t>(in);
    c.num_machines = read_pod<std::int32_t>(in);
    c.num_jobs = read_pod<std::int32_t>(in);
    const double norm_scale = read_pod<double>(in);
    const std::uint64_t count = read_pod<std::uint64_t>(in);
    Rng rng(0);
    Network net(c, norm_scale, rng);
    if (count != net.params().size()) throw std::runtime_error("checkpoint parameter count mismatch");
    in.read(reinterpret_cast<char*>(net.params().data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return net;
}

// ---------------------------------------------------------------------------
// Training.
// ---------------------------------------------------------------------------

namespace {

struct Sample {
    Instance instance;
    FeatureTensors features;
    Assignment assignment;
    std::vector<Time> starts;
};

LossResult sample_loss(TrainStage stage, const Network& net, const Sample& s,
                       const std::vector<double>& output, const LossConfig& lc) {
    const NetworkConfig& cfg = net.config();
    switch (stage) {
        case TrainStage::Assign:
            return assignment_loss(output, s.features.compat_mask, cfg.num_tasks, cfg.num_machines,
                                   s.assignment, lc);
        case TrainStage::Sched:
            return scheduling_loss(output, s.starts, s.assignment, s.instance, lc);
        case TrainStage::Joint: {
            const int nm = cfg.num_tasks * cfg.num_machines;
            std::vector<double> logits(output.begin(), output.begin() + nm);
            std::vector<double> starts(output.begin() + nm, output.end());
            LossResult lc_part = assignment_loss(logits, s.features.compat_mask, cfg.num_tasks,
                                                 cfg.num_machines, s.assignment, lc);
            LossResult lr_part = scheduling_loss(starts, s.starts, s.assignment, s.instance, lc);
            LossResult combined;
            combined.value = lc_part.value + lr_part.value;
            combined.grad = std::move(lc_part.grad);
            combined.grad.insert(combined.grad.end(), lr_part.grad.begin(), lr_part.grad.end());
            return combined;
        }
    }
    throw std::logic_error("unknown training stage");
}

} // namespace

TrainResult train(TrainStage stage, const std::vector<DatasetRecord>& records,
                  const DatasetSplit& split, const NetworkConfig& net_cfg, const TrainConfig& tc,
                  const LossConfig& lc) {
    if (records.empty()) throw std::invalid_argument("empty dataset");

    double scale = 1.0;
    for (const auto& rec : records)
        for (const auto& row : rec.durations)
            for (const auto& cell : row)
                if (cell) scale = std::max(scale, static_cast<double>(*cell));

    std::vector<Sample> samples;
    samples.reserve(records.size());
    for (const auto& rec : records) {
        Sample s;
        s.instance = record_instance(rec);
        s.features = split_features(s.instance, scale);
        s.assignment = Assignment{rec.assignment};
        s.starts = rec.starts;
        samples.push_back(std::move(s));
    }

    // Scheduling records map to the split through their source record's
    // position; other stages use positions directly.
    auto member_index = [&](std::size_t i) {
        return stage == TrainStage::Sched ? records[i].meta.instance_index : static_cast<int>(i);
    };
    std::set<int> train_set(split.train.begin(), split.train.end());
    std::set<int> val_set(split.validation.begin(), split.validation.end());
    std::vector<int> train_idx, val_idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (train_set.count(member_index(i))) train_idx.push_back(static_cast<int>(i));
        if (val_set.count(member_index(i))) val_idx.push_back(static_cast<int>(i));
    }
    if (train_idx.empty() || val_idx.empty())
        throw std::invalid_argument("training requires non-empty train and validation splits");

    NetworkConfig cfg = net_cfg;
    cfg.num_tasks = samples.front().features.num_tasks;
    cfg.num_machines = samples.front().features.num_machines;
    cfg.num_jobs = samples.front().features.num_jobs;
    for (const auto& s : samples)
        if (s.features.num_tasks != cfg.num_tasks || s.features.num_machines != cfg.num_machines ||
            s.features.num_jobs != cfg.num_jobs)
            throw std::invalid_argument("all records in a dataset must share one shape");
    if (stage == TrainStage::Assign) cfg.head = Head::AssignmentLogits;
    if (stage == TrainStage::Sched) cfg.head = Head::StartTimes;
    if (stage == TrainStage::Joint) cfg.head = Head::Joint;

    Rng rng(tc.rng_seed);
    Network net(cfg, scale, rng);
    const std::size_t pcount = net.params().size();

    std::vector<double> adam_m(pcount, 0.0), adam_v(pcount, 0.0);
    const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    long step = 0;
    double lr = tc.learning_rate;

    auto conditioning = [&](const Sample& s) -> std::optional<Assignment> {
        return stage == TrainStage::Sched ? std::optional<Assignment>(s.assignment) : std::nullopt;
    };

    auto eval_loss = [&](const std::vector<int>& idx) {
        double total = 0;
        for (int i : idx) {
            const Sample& s = samples[static_cast<std::size_t>(i)];
            auto out = net.forward(s.features, conditioning(s), false, nullptr);
            total += sample_loss(stage, net, s, out, lc).value;
        }
        return total / static_cast<double>(idx.size());
    };

    TrainResult result;
    std::vector<double> best_params = net.params();
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int stale = 0, plateau_stale = 0;
    std::vector<double> grad(pcount);

    for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        rng.shuffle(train_idx);
        double train_loss = 0;
        std::size_t at = 0;
        while (at < train_idx.size()) {
            const std::size_t batch_end = std::min(train_idx.size(), at + static_cast<std::size_t>(tc.batch_size));
            const double inv = 1.0 / static_cast<double>(batch_end - at);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (; at < batch_end; ++at) {
                const Sample& s = samples[static_cast<std::size_t>(train_idx[at])];
                Network::Trace trace;
                auto out = net.forward_trace(s.features, conditioning(s), true, &rng, trace);
                LossResult loss = sample_loss(stage, net, s, out, lc);
                train_loss += loss.value;
                for (double& g : loss.grad) g *= inv;
                net.backward(trace, loss.grad, grad);
            }
            ++step;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < pcount; ++i) {
                adam_m[i] = beta1 * adam_m[i] + (1.0 - beta1) * grad[i];
                adam_v[i] = beta2 * adam_v[i] + (1.0 - beta2) * grad[i] * grad[i];
                net.params()[i] -= lr * (adam_m[i] / bc1) / (std::sqrt(adam_v[i] / bc2) + adam_eps);
            }
        }
        train_loss /= static_cast<double>(train_idx.size());
        const double val_loss = eval_loss(val_idx);
        result.history.push_back({epoch, train_loss, val_loss, lr});

        if (val_loss < best_val) {
            best_val = val_loss;
            best_epoch = epoch;
            best_params = net.params();
            stale = 0;
            plateau_stale = 0;
        } else {
            ++stale;
            ++plateau_stale;
            if (stale >= tc.early_stop_patience) break;
            if (plateau_stale >= tc.plateau_patience) {
                lr *= 0.1;
                plateau_stale = 0;
            }
        }
    }

    net.params() = std::move(best_params);
    result.net = std::move(net);
    result.best_val = best_val;
    result.best_epoch = best_epoch;
    return result;
}

std::pair<TrainResult, std::vector<GridOutcome>> grid_search(TrainStage stage,
                                                             const std::vector<DatasetRecord>& records,
                                                             const DatasetSplit& split,
                                                             NetworkConfig net_cfg, TrainConfig tc,
                                                             const LossConfig& lc) {
    std::vector<GridOutcome> outcomes;
    std::optional<TrainResult> best;
    for (int enc : {2, 3})
        for (int dec : {2, 3})
            for (double lr : {1e-1, 1e-2, 1e-3}) {
                NetworkConfig cfg = net_cfg;
                cfg.encoder_layers = enc;
                cfg.decoder_layers = dec;
                TrainConfig t = tc;
                t.learning_rate = lr;
                TrainResult r = train(stage, records, split, cfg, t, lc);
                outcomes.push_back({r.net.config(), lr, r.best_val});
                if (!best || r.best_val < best->best_val) best = std::move(r);
            }
    return {std::move(*best), std::move(outcomes)};
}

Solution predict_pipeline(const Instance& inst, const Network& assign_net, const Network& sched_net) {
    FeatureTensors fa = split_features(inst, assign_net.norm_scale());
    auto logits = assign_net.forward(fa, std::nullopt);
    AssignmentDistribution dist = make_distribution(logits, fa);
    Assignment a = argmax_assignment(dist);

    FeatureTensors fs = split_features(inst, sched_net.norm_scale());
    auto predicted = sched_net.forward(fs, a);

    Solution sol;
    sol.assignment = a;
    sol.schedule = recover_from_predictions(inst, a, predicted);
    sol.status = SolveStatus::FeasibleTimeLimit;
    return sol;
}

Solution predict_one_stage(const Instance& inst, const Network& joint_net) {
    FeatureTensors f = split_features(inst, joint_net.norm_scale());
    auto out = joint_net.forward(f, std::nullopt);
    const int nm = f.num_tasks * f.num_machines;
    std::vector<double> logits(out.begin(), out.begin() + nm);
    std::vector<double> predicted(out.begin() + nm, out.end());
    AssignmentDistribution dist = make_distribution(logits, f);
    Assignment a = argmax_assignment(dist);

    Solution sol;
    sol.assignment = a;
    sol.schedule = recover_from_predictions(inst, a, predicted);
    sol.status = SolveStatus::FeasibleTimeLimit;
    return sol;
}

} // namespace fjsp
