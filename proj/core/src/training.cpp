#include "genlab/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "genlab/errors.hpp"

namespace genlab {

namespace {

constexpr double kDivergenceCeiling = 1e12;

bool all_zero(const Mlp& net) {
    for (const Matrix& W : net.weights)
        for (double v : W.data)
            if (v != 0.0) return false;
    return true;
}

// Chunked margin scan; calls fn(margin) per example.
template <typename Fn>
void scan_margins(const Mlp& net, const LabeledDataset& data, Fn&& fn) {
    const std::size_t chunk = 256;
    const std::size_t dim = net.input_dim();
    for (std::size_t start = 0; start < data.size(); start += chunk) {
        const std::size_t n = std::min(chunk, data.size() - start);
        Matrix X(n, dim);
        for (std::size_t i = 0; i < n; ++i)
            std::memcpy(X.data.data() + i * dim, data.inputs[start + i].data(),
                        dim * sizeof(double));
        const std::vector<Matrix> G = batch_preacts(net, X);
        const Matrix& logits = G.back();
        Vector row(logits.cols);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < logits.cols; ++k) row[k] = logits(i, k);
            fn(margin(row, data.labels[start + i]));
        }
    }
}

}  // namespace

double dataset_error(const Mlp& net, const LabeledDataset& data) {
    if (data.size() == 0) throw InvalidInput("dataset_error: empty dataset");
    std::size_t wrong = 0;
    scan_margins(net, data, [&](double g) { wrong += g < 0.0 ? 1 : 0; });
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double mean_margin(const Mlp& net, const LabeledDataset& data) {
    if (data.size() == 0) throw InvalidInput("mean_margin: empty dataset");
    double sum = 0.0;
    scan_margins(net, data, [&](double g) { sum += g; });
    return sum / static_cast<double>(data.size());
}

bool margin_stop_check(const Mlp& net, const LabeledDataset& data, double p,
                       double gamma_star) {
    if (data.size() == 0) throw InvalidInput("margin_stop_check: empty dataset");
    if (p <= 0.0 || p > 1.0) throw InvalidInput("margin_stop_check: p in (0,1]");
    std::size_t good = 0;
    scan_margins(net, data, [&](double g) { good += g >= gamma_star ? 1 : 0; });
    return static_cast<double>(good) >= p * static_cast<double>(data.size());
}

TrainReport sgd_train(Mlp& net, const LabeledDataset& data, const TrainConfig& cfg) {
    if (cfg.lr < 0.0) throw InvalidInput("sgd_train: lr must be >= 0");
    if (cfg.batch_size == 0) throw InvalidInput("sgd_train: batch_size must be >= 1");
    if (data.size() == 0) throw InvalidInput("sgd_train: empty dataset");
    if (data.dim() != net.input_dim()) throw InvalidInput("sgd_train: dim mismatch");

    // A pristine all-zero net is initialized here so that (seed_init,
    // seed_order, data) fully determine the result; a pre-initialized net is
    // trained as-is.
    if (all_zero(net)) {
        Rng init_rng(cfg.seed_init);
        Mlp fresh = make_mlp_xavier(net.widths, init_rng, cfg.init_scale);
        net = std::move(fresh);
    }

    const std::size_t D = net.depth();
    const std::size_t m = data.size();
    const std::size_t dim = data.dim();
    std::vector<Matrix> velocity;
    for (const Matrix& W : net.weights) velocity.emplace_back(W.rows, W.cols);

    Rng order_rng(cfg.seed_order);
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;

    TrainReport rep;
    double lr = cfg.lr;
    double last_finite_loss = 0.0;
    std::string stop_reason = "max_epochs";

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const std::size_t j = i + order_rng.below(m - i);
            std::swap(order[i], order[j]);
        }
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < m; start += cfg.batch_size) {
            const std::size_t n = std::min(cfg.batch_size, m - start);
            Matrix X(n, dim);
            std::vector<int> y(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::memcpy(X.data.data() + i * dim, data.inputs[order[start + i]].data(),
                            dim * sizeof(double));
                y[i] = data.labels[order[start + i]];
            }
            double loss = 0.0;
            std::vector<Matrix> grads = batch_grad(net, X, y, cfg.loss_kind, &loss);
            if (!std::isfinite(loss) || loss > kDivergenceCeiling)
                throw DivergedError(last_finite_loss, epoch);
            last_finite_loss = loss;
            epoch_loss += loss;
            ++batches;
            for (std::size_t d = 0; d < D; ++d) {
                double* v = velocity[d].data.data();
                double* w = net.weights[d].data.data();
                const double* g = grads[d].data.data();
                const std::size_t sz = velocity[d].data.size();
                for (std::size_t k = 0; k < sz; ++k) {
                    v[k] = cfg.momentum * v[k] - lr * g[k];
                    w[k] += v[k];
                }
            }
        }
        rep.epochs = epoch + 1;
        rep.final_loss = epoch_loss / static_cast<double>(batches);

        if (cfg.lr_decay.every_n_epochs > 0 &&
            (epoch + 1) % cfg.lr_decay.every_n_epochs == 0) {
            lr *= cfg.lr_decay.factor;
            ++rep.decay_events;
        }

        bool stop = false;
        switch (cfg.stop.kind) {
            case StopRuleKind::MarginFrac:
                stop = margin_stop_check(net, data, cfg.stop.p, cfg.stop.gamma_star);
                if (stop) stop_reason = "margin_frac";
                break;
            case StopRuleKind::TrainLoss:
                stop = rep.final_loss <= cfg.stop.tau;
                if (stop) stop_reason = "train_loss";
                break;
            case StopRuleKind::TrainAcc:
                stop = dataset_error(net, data) == 0.0;
                if (stop) stop_reason = "train_acc";
                break;
            case StopRuleKind::MaxEpochs:
                break;
        }
        if (stop) break;
    }

    rep.final_lr = lr;
    rep.final_acc = 1.0 - dataset_error(net, data);
    std::size_t good = 0;
    scan_margins(net, data, [&](double g) { good += g >= cfg.stop.gamma_star ? 1 : 0; });
    rep.margin_frac = static_cast<double>(good) / static_cast<double>(m);
    rep.stop_reason = stop_reason;
    return rep;
}

const char* to_string(StochasticityMode mode) {
    switch (mode) {
        case StochasticityMode::AllDiff: return "all_diff";
        case StochasticityMode::DiffData: return "diff_data";
        case StochasticityMode::DiffInit: return "diff_init";
        case StochasticityMode::DiffOrder: return "diff_order";
    }
    return "?";
}

namespace {

LabeledDataset take_half(const LabeledDataset& data, const std::vector<std::size_t>& idx,
                         std::size_t begin, std::size_t end) {
    LabeledDataset out;
    out.meta = data.meta;
    for (std::size_t i = begin; i < end; ++i) {
        out.inputs.push_back(data.inputs[idx[i]]);
        out.labels.push_back(data.labels[idx[i]]);
    }
    return out;
}

}  // namespace

std::pair<Mlp, Mlp> make_run_pair(const std::vector<std::size_t>& arch,
                                  const LabeledDataset& data, const TrainConfig& cfg,
                                  StochasticityMode mode) {
    const bool split_data =
        mode == StochasticityMode::DiffData || mode == StochasticityMode::AllDiff;
    if (split_data && data.size() < 2)
        throw InvalidInput("make_run_pair: need >= 2 examples to split");

    TrainConfig cfg1 = cfg;
    TrainConfig cfg2 = cfg;
    if (mode == StochasticityMode::DiffInit || mode == StochasticityMode::AllDiff)
        cfg2.seed_init = Rng(cfg.seed_init).split(0xA11D1FFULL).seed();
    if (mode == StochasticityMode::DiffOrder || mode == StochasticityMode::AllDiff)
        cfg2.seed_order = Rng(cfg.seed_order).split(0xA11D1FFULL).seed();

    LabeledDataset d1, d2;
    if (split_data) {
        // a dedicated stream so the training shuffle is unaffected
        Rng split_rng = Rng(cfg.seed_order).split(0x5B117ULL);
        std::vector<std::size_t> idx(data.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            std::swap(idx[i], idx[i + split_rng.below(idx.size() - i)]);
        const std::size_t half = data.size() / 2;
        d1 = take_half(data, idx, 0, half);
        d2 = take_half(data, idx, half, 2 * half);
    }
    const LabeledDataset& t1 = split_data ? d1 : data;
    const LabeledDataset& t2 = split_data ? d2 : data;

    Mlp net1 = make_mlp(arch);
    Mlp net2 = make_mlp(arch);
    sgd_train(net1, t1, cfg1);
    sgd_train(net2, t2, cfg2);
    return {std::move(net1), std::move(net2)};
}

std::vector<std::pair<double, double>> interpolate_error(const Mlp& net1, const Mlp& net2,
                                                         const LabeledDataset& data,
                                                         std::size_t steps) {
    if (steps < 2) throw InvalidInput("interpolate_error: steps must be >= 2");
    if (net1.widths != net2.widths)
        throw InvalidInput("interpolate_error: architecture mismatch");
    std::vector<std::pair<double, double>> out;
    Mlp blend = net1;
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(steps - 1);
        for (std::size_t d = 0; d < blend.depth(); ++d)
            for (std::size_t k = 0; k < blend.weights[d].data.size(); ++k)
                blend.weights[d].data[k] =
                    (1.0 - t) * net1.weights[d].data[k] + t * net2.weights[d].data[k];
        out.emplace_back(t, dataset_error(blend, data));
    }
    return out;
}

// ---------- JSON ----------

namespace {

using nlohmann::json;

const char* loss_name(LossKind k) {
    switch (k) {
        case LossKind::CrossEntropy: return "cross_entropy";
        case LossKind::SquaredError: return "squared_error";
        case LossKind::MarginAscent: return "margin_ascent";
    }
    return "?";
}

LossKind loss_from_name(const std::string& s) {
    if (s == "cross_entropy") return LossKind::CrossEntropy;
    if (s == "squared_error") return LossKind::SquaredError;
    if (s == "margin_ascent") return LossKind::MarginAscent;
    throw InvalidInput("unknown loss_kind: " + s);
}

const char* stop_name(StopRuleKind k) {
    switch (k) {
        case StopRuleKind::MarginFrac: return "margin_frac";
        case StopRuleKind::TrainLoss: return "train_loss";
        case StopRuleKind::TrainAcc: return "train_acc";
        case StopRuleKind::MaxEpochs: return "max_epochs";
    }
    return "?";
}

StopRuleKind stop_from_name(const std::string& s) {
    if (s == "margin_frac") return StopRuleKind::MarginFrac;
    if (s == "train_loss") return StopRuleKind::TrainLoss;
    if (s == "train_acc") return StopRuleKind::TrainAcc;
    if (s == "max_epochs") return StopRuleKind::MaxEpochs;
    throw InvalidInput("unknown stop rule: " + s);
}

}  // namespace

std::string to_json(const TrainConfig& cfg) {
    json j;
    j["lr"] = cfg.lr;
    j["momentum"] = cfg.momentum;
    j["batch_size"] = cfg.batch_size;
    if (cfg.lr_decay.every_n_epochs > 0)
        j["lr_decay"] = {{"factor", cfg.lr_decay.factor},
                         {"every_n_epochs", cfg.lr_decay.every_n_epochs}};
    j["loss_kind"] = loss_name(cfg.loss_kind);
    j["stop_rule"] = {{"kind", stop_name(cfg.stop.kind)},
                      {"p", cfg.stop.p},
                      {"gamma_star", cfg.stop.gamma_star},
                      {"tau", cfg.stop.tau}};
    j["seed_init"] = cfg.seed_init;
    j["seed_order"] = cfg.seed_order;
    j["max_epochs"] = cfg.max_epochs;
    j["init_scale"] = cfg.init_scale;
    return j.dump(2);
}

TrainConfig train_config_from_json(const std::string& text) {
    json j = json::parse(text);
    TrainConfig cfg;
    cfg.lr = j.value("lr", cfg.lr);
    cfg.momentum = j.value("momentum", cfg.momentum);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    if (j.contains("lr_decay")) {
        cfg.lr_decay.factor = j["lr_decay"].value("factor", 1.0);
        cfg.lr_decay.every_n_epochs = j["lr_decay"].value("every_n_epochs", 0u);
    }
    if (j.contains("loss_kind")) cfg.loss_kind = loss_from_name(j["loss_kind"]);
    if (j.contains("stop_rule")) {
        const json& s = j["stop_rule"];
        cfg.stop.kind = stop_from_name(s.value("kind", "max_epochs"));
        cfg.stop.p = s.value("p", cfg.stop.p);
        cfg.stop.gamma_star = s.value("gamma_star", cfg.stop.gamma_star);
        cfg.stop.tau = s.value("tau", cfg.stop.tau);
    }
    cfg.seed_init = j.value("seed_init", cfg.seed_init);
    cfg.seed_order = j.value("seed_order", cfg.seed_order);
    cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
    cfg.init_scale = j.value("init_scale", cfg.init_scale);
    return cfg;
}

std::string to_json(const TrainReport& rep) {
    json j;
    j["epochs"] = rep.epochs;
    j["final_loss"] = rep.final_loss;
    j["final_acc"] = rep.final_acc;
    j["margin_frac"] = rep.margin_frac;
    j["stop_reason"] = rep.stop_reason;
    j["decay_events"] = rep.decay_events;
    j["final_lr"] = rep.final_lr;
    return j.dump(2);
}

}  // namespace genlab
