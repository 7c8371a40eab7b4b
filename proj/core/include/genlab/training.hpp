#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/network.hpp"

namespace genlab {

enum class StopRuleKind { MarginFrac, TrainLoss, TrainAcc, MaxEpochs };

struct StopRule {
    StopRuleKind kind = StopRuleKind::MaxEpochs;
    double p = 0.99;          // MarginFrac: required fraction with margin >= gamma_star
    double gamma_star = 10.0;
    double tau = 0.0;         // TrainLoss threshold
};

struct LrDecay {
    double factor = 1.0;
    std::size_t every_n_epochs = 0;  // 0 disables decay
};

struct TrainConfig {
    double lr = 0.1;
    double momentum = 0.9;  // heavy-ball: v <- mu*v - lr*g; W <- W + v
    std::size_t batch_size = 1;
    LrDecay lr_decay;
    LossKind loss_kind = LossKind::CrossEntropy;
    StopRule stop;
    std::uint64_t seed_init = 1;
    std::uint64_t seed_order = 2;
    std::size_t max_epochs = 1000;
    double init_scale = 1.0;  // the c in N(0, (c/sqrt(fan_in))^2)
};

struct TrainReport {
    std::size_t epochs = 0;
    double final_loss = 0.0;
    double final_acc = 0.0;
    double margin_frac = 0.0;  // fraction with margin >= stop.gamma_star
    std::string stop_reason;
    std::size_t decay_events = 0;
    double final_lr = 0.0;
};

// Trains net in place. Epoch = one shuffle-then-scan pass, last short batch
// kept. Deterministic given (seed_init, seed_order, data). Throws
// DivergedError when the loss goes non-finite or above 1e12.
TrainReport sgd_train(Mlp& net, const LabeledDataset& data, const TrainConfig& cfg);

bool margin_stop_check(const Mlp& net, const LabeledDataset& data, double p,
                       double gamma_star);

enum class StochasticityMode { AllDiff, DiffData, DiffInit, DiffOrder };
const char* to_string(StochasticityMode mode);

// Two trained nets differing exactly in the sources named by the mode.
std::pair<Mlp, Mlp> make_run_pair(const std::vector<std::size_t>& arch,
                                  const LabeledDataset& data, const TrainConfig& cfg,
                                  StochasticityMode mode);

// 0-1 error of (1-t) W1 + t W2 at `steps` equispaced t in [0, 1].
std::vector<std::pair<double, double>> interpolate_error(const Mlp& net1, const Mlp& net2,
                                                         const LabeledDataset& data,
                                                         std::size_t steps);

double dataset_error(const Mlp& net, const LabeledDataset& data);
double mean_margin(const Mlp& net, const LabeledDataset& data);

// JSON round-trip for configs and reports.
std::string to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& text);
std::string to_json(const TrainReport& rep);

}  // namespace genlab
