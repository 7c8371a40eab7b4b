#include "genlab/ucfail.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "genlab/errors.hpp"

namespace genlab {

LinearLearnerWeights linear_learn(const LabeledDataset& S) {
    if (!S.meta) throw InvalidInput("linear_learn: missing scenario metadata");
    const std::size_t K = S.meta->K;
    const std::size_t N = S.meta->N;
    LinearLearnerWeights w;
    w.w1.assign(K, 0.0);
    w.w2.assign(N, 0.0);
    const double scale = 2.0 * static_cast<double>(S.size());
    for (std::size_t j = 0; j < K; ++j) w.w1[j] = scale * S.meta->u[j];
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < N; ++j)
            w.w2[j] += S.labels[i] * S.inputs[i][K + j];
    return w;
}

double linear_eval(const LinearLearnerWeights& w, const Vector& x, std::size_t K) {
    if (x.size() != w.w1.size() + w.w2.size() || K != w.w1.size())
        throw InvalidInput("linear_eval: dimension mismatch");
    double h = 0.0;
    for (std::size_t j = 0; j < K; ++j) h += w.w1[j] * x[j];
    for (std::size_t j = 0; j < w.w2.size(); ++j) h += w.w2[j] * x[K + j];
    return h;
}

ExpModel make_exp_model(const LabeledDataset& S) {
    if (!S.meta) throw InvalidInput("make_exp_model: missing scenario metadata");
    ExpModel m;
    m.S = &S;
    m.N = S.meta->N;
    m.log_eta = static_cast<double>(m.N) * std::log(4.0 * M_PI);
    return m;
}

SignedLog exp_eval(const ExpModel& model, const Vector& z) {
    if (!model.S) throw InvalidInput("exp_eval: empty model");
    if (z.size() != 2 * model.N) throw InvalidInput("exp_eval: dim(z) must be 2N");
    const LabeledDataset& S = *model.S;
    // exponents t_i = ||(z + x_i)/2||^2; factor out the max for stability
    std::vector<double> t(S.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) {
            const double v = 0.5 * (z[j] + S.inputs[i][j]);
            s += v * v;
        }
        t[i] = s;
        mx = std::max(mx, s);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i)
        acc += S.labels[i] * std::exp(t[i] - mx);
    SignedLog out;
    if (acc == 0.0) {
        out.sign = 0;
        out.log_mag = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.sign = acc > 0.0 ? 1 : -1;
    out.log_mag = mx + std::log(std::fabs(acc));
    return out;
}

namespace {

// fresh draw from the linear test distribution that shares the dataset's u
double linear_test_error(const LinearLearnerWeights& w, const ScenarioMeta& meta,
                         std::size_t samples, Rng& rng) {
    const double noise_std = std::sqrt(32.0 / static_cast<double>(meta.N));
    double w1u = 0.0;
    for (std::size_t j = 0; j < meta.K; ++j) w1u += w.w1[j] * meta.u[j];
    std::size_t wrong = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const int y = (rng.next_u64() & 1) ? 1 : -1;
        double h = 2.0 * y * w1u;
        for (std::size_t j = 0; j < meta.N; ++j)
            h += w.w2[j] * rng.gaussian(noise_std);
        if (y * h < 0.0) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(samples);
}

UcTrial linear_trial(const UcParams& p, Rng rng) {
    LinearSetupParams lp;
    lp.m = p.m;
    lp.K = p.K;
    lp.N = p.N;
    LabeledDataset S = gen_linear(lp, rng);
    const LinearLearnerWeights w = linear_learn(S);

    UcTrial tr;
    tr.min_train_margin = std::numeric_limits<double>::infinity();
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double g = S.labels[i] * linear_eval(w, S.inputs[i], p.K);
        tr.min_train_margin = std::min(tr.min_train_margin, g);
        if (g < 0.0) ++wrong;
    }
    tr.train_error = static_cast<double>(wrong) / static_cast<double>(S.size());

    const LabeledDataset Sp = linear_bad_dataset(S);
    wrong = 0;
    for (std::size_t i = 0; i < Sp.size(); ++i)
        if (Sp.labels[i] * linear_eval(w, Sp.inputs[i], p.K) < 0.0) ++wrong;
    tr.sprime_error = static_cast<double>(wrong) / static_cast<double>(Sp.size());

    tr.test_error = linear_test_error(w, *S.meta, p.test_samples, rng);
    return tr;
}

// For the exponential scenario the "margin" is reported in the log domain:
// min_i sign-correct ? log|h| : -inf. A value >= 0 certifies y h(x) >= 1.
UcTrial exp_trial(const UcParams& p, Rng rng) {
    LabeledDataset S = gen_exp(p.m, p.N, rng);
    const ExpModel model = make_exp_model(S);

    UcTrial tr;
    tr.min_train_margin = std::numeric_limits<double>::infinity();
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const SignedLog h = exp_eval(model, S.inputs[i]);
        if (h.sign != S.labels[i]) {
            ++wrong;
            tr.min_train_margin = -std::numeric_limits<double>::infinity();
        } else {
            tr.min_train_margin = std::min(tr.min_train_margin, h.log_mag);
        }
    }
    tr.train_error = static_cast<double>(wrong) / static_cast<double>(S.size());

    const LabeledDataset Sp = exp_bad_dataset(S);
    wrong = 0;
    for (std::size_t i = 0; i < Sp.size(); ++i)
        if (exp_eval(model, Sp.inputs[i]).sign != Sp.labels[i]) ++wrong;
    tr.sprime_error = static_cast<double>(wrong) / static_cast<double>(Sp.size());

    const std::size_t N = p.N;
    std::size_t test_wrong = 0;
    Vector z(2 * N);
    for (std::size_t s = 0; s < p.test_samples; ++s) {
        const int y = (rng.next_u64() & 1) ? 1 : -1;
        for (std::size_t j = 0; j < N; ++j) z[j] = y * S.meta->u[j];
        for (std::size_t j = 0; j < N; ++j) z[N + j] = rng.gaussian();
        if (exp_eval(model, z).sign != y) ++test_wrong;
    }
    tr.test_error = static_cast<double>(test_wrong) / static_cast<double>(p.test_samples);
    return tr;
}

UcTrial hypersphere_trial(const UcParams& p, Rng rng) {
    const auto with_const = [&](LabeledDataset d) {
        if (p.augment != 0.0)
            for (Vector& x : d.inputs) x.push_back(p.augment);
        return d;
    };
    const LabeledDataset S0 = gen_hypersphere(p.m, p.dim, p.r_in, p.r_out, rng);
    const LabeledDataset S = with_const(S0);
    TrainConfig cfg = p.train;
    cfg.seed_init = rng.split(1).seed();
    cfg.seed_order = rng.split(2).seed();
    Mlp net = make_mlp({S.dim(), p.width, 2});
    sgd_train(net, S, cfg);

    UcTrial tr;
    tr.train_error = dataset_error(net, S);
    tr.min_train_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S.size(); ++i)
        tr.min_train_margin = std::min(
            tr.min_train_margin, margin(forward_logits(net, S.inputs[i]), S.labels[i]));

    const LabeledDataset Sp = with_const(hypersphere_bad_dataset(S0, p.r_in, p.r_out));
    tr.sprime_error = dataset_error(net, Sp);

    Rng test_rng = rng.split(3);
    const LabeledDataset T =
        with_const(gen_hypersphere(p.test_samples, p.dim, p.r_in, p.r_out, test_rng));
    tr.test_error = dataset_error(net, T);
    return tr;
}

}  // namespace

UcReport ucfail_report(UcScenario scenario, const UcParams& params, std::size_t trials,
                       Rng& rng) {
    if (trials == 0) throw InvalidInput("ucfail_report: trials must be >= 1");
    UcReport rep;
    rep.scenario = scenario;

    switch (scenario) {
        case UcScenario::Linear: {
            LinearSetupParams lp;
            lp.m = params.m;
            lp.K = params.K;
            lp.N = params.N;
            rep.conditions_ok = linear_conditions(lp, params.eps, params.delta);
            break;
        }
        case UcScenario::Exp:
            rep.conditions_ok = exp_conditions(params.m, params.N, params.eps, params.delta);
            break;
        case UcScenario::Hypersphere:
            rep.conditions_ok = true;
            break;
    }
    rep.warning = !rep.conditions_ok;

    double test_sum = 0.0;
    std::size_t full = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng trial_rng = rng.split(t);
        UcTrial tr;
        switch (scenario) {
            case UcScenario::Linear: tr = linear_trial(params, trial_rng); break;
            case UcScenario::Exp: tr = exp_trial(params, trial_rng); break;
            case UcScenario::Hypersphere: tr = hypersphere_trial(params, trial_rng); break;
        }
        test_sum += tr.test_error;
        if (tr.sprime_error == 1.0) ++full;
        rep.trials.push_back(tr);
    }
    rep.mean_test_error = test_sum / static_cast<double>(trials);
    rep.frac_sprime_full = static_cast<double>(full) / static_cast<double>(trials);
    rep.epsilon_lower_bound = 1.0 - rep.mean_test_error;
    return rep;
}

std::string UcReport::to_json() const {
    nlohmann::json j;
    switch (scenario) {
        case UcScenario::Linear: j["scenario"] = "linear"; break;
        case UcScenario::Exp: j["scenario"] = "exp"; break;
        case UcScenario::Hypersphere: j["scenario"] = "hypersphere"; break;
    }
    j["mean_test_error"] = mean_test_error;
    j["frac_sprime_full"] = frac_sprime_full;
    j["epsilon_unif_alg_lower_bound"] = epsilon_lower_bound;
    j["conditions_ok"] = conditions_ok;
    j["warning"] = warning;
    nlohmann::json rows = nlohmann::json::array();
    for (const UcTrial& t : trials)
        rows.push_back({{"train_error", t.train_error},
                        {"test_error", t.test_error},
                        {"sprime_error", t.sprime_error},
                        {"min_train_margin", t.min_train_margin}});
    j["trials"] = rows;
    return j.dump(2);
}

void UcReport::to_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidInput("UcReport::to_csv: cannot open " + path);
    out << "trial,train_error,test_error,sprime_error,min_train_margin\n";
    char buf[128];
    for (std::size_t i = 0; i < trials.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i,
                      trials[i].train_error, trials[i].test_error, trials[i].sprime_error,
                      trials[i].min_train_margin);
        out << buf;
    }
}

}  // namespace genlab
