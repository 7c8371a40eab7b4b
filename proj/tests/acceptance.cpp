// End-to-end acceptance suite: one pass/fail line per criterion.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "genlab/bounds.hpp"
#include "genlab/datagen.hpp"
#include "genlab/errors.hpp"
#include "genlab/experiments.hpp"
#include "genlab/gde.hpp"
#include "genlab/linalg.hpp"
#include "genlab/network.hpp"
#include "genlab/noise.hpp"
#include "genlab/training.hpp"
#include "genlab/ucfail.hpp"
#include "oracles.hpp"

using namespace genlab;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, double secs, const std::string& detail) {
    std::printf("criterion %d (%s): %s  [%.1fs]%s%s\n", idx, name,
                pass ? "PASS" : "FAIL", secs, detail.empty() ? "" : "  -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

template <typename Fn>
void run_criterion(int idx, const char* name, Fn fn) {
    const auto t0 = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(idx, name, pass, secs, detail);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ------------------------------------------------------------------------
// 1. numeric kernels vs independent oracles

bool crit_numerics(std::string& detail) {
    Rng rng(101);
    double worst_spec = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform() * 32.0);
        const std::size_t c = 1 + static_cast<std::size_t>(rng.uniform() * 32.0);
        const Matrix M = sample_gaussian_matrix(std::min(r, std::size_t{32}),
                                                std::min(c, std::size_t{32}), 1.0, rng);
        const double ours = spectral_norm(M);
        const double truth = oracle::svd_top(M);
        worst_spec = std::max(worst_spec, std::fabs(ours - truth) / truth);
    }
    if (worst_spec > 1e-8) {
        detail = "spectral_norm worst rel err " + std::to_string(worst_spec);
        return false;
    }

    double worst_jac = 0.0;
    int nets_checked = 0;
    for (int t = 0; t < 50; ++t) {
        Rng net_rng = rng.split(500 + t);
        const auto w = [&] { return 3 + static_cast<std::size_t>(net_rng.uniform() * 8.0); };
        const std::vector<std::size_t> arch{w(), w(), w(), w()};
        const Mlp net = make_mlp_xavier(arch, net_rng);
        // resample the probe until every preactivation is clear of the
        // ReLU boundary (the FD step is 1e-6)
        Vector x(arch[0]);
        ForwardTrace trace;
        bool ok = false;
        for (int tries = 0; tries < 200 && !ok; ++tries) {
            for (double& v : x) v = net_rng.gaussian();
            trace = forward_trace(net, x);
            ok = true;
            for (const Vector& g : trace.preacts)
                for (double v : g)
                    if (std::fabs(v) < 1e-3) ok = false;
        }
        if (!ok) continue;
        ++nets_checked;
        for (std::size_t d_from = 1; d_from <= 3; ++d_from)
            for (std::size_t d_to = d_from; d_to <= 3; ++d_to) {
                const Matrix J = interlayer_jacobian(trace, net, d_from, d_to);
                const Matrix F = oracle::fd_interlayer_jacobian(net, x, d_from, d_to);
                worst_jac = std::max(worst_jac, oracle::max_rel_err(J, F));
            }
    }
    if (nets_checked < 50) {
        detail = "only " + std::to_string(nets_checked) + "/50 nets had clear probes";
        return false;
    }
    if (worst_jac > 1e-6) {
        detail = "jacobian worst rel err vs FD " + std::to_string(worst_jac);
        return false;
    }
    detail = "spectral rel err " + std::to_string(worst_spec) + ", jacobian rel err " +
             std::to_string(worst_jac);
    return true;
}

// ------------------------------------------------------------------------
// 2. perturbation deviations stay inside the analytic budgets

bool crit_noise(std::string& detail) {
    const double delta_hat = 0.05;
    const std::size_t trials = 200;
    Rng rng(202);
    std::size_t min_within = trials;
    for (int t = 0; t < 20; ++t) {
        Rng net_rng = rng.split(t);
        const std::size_t H = 4 + static_cast<std::size_t>(net_rng.uniform() * 13.0);
        std::vector<std::size_t> arch;
        if (t % 2 == 0)
            arch = {std::min<std::size_t>(H, 16), std::min<std::size_t>(H, 16), 2};
        else
            arch = {std::min<std::size_t>(H, 16), std::min<std::size_t>(H, 16),
                    std::min<std::size_t>(H, 16), 2};
        const Mlp net = make_mlp_xavier(arch, net_rng);
        Vector x(arch[0]);
        for (double& v : x) v = net_rng.gaussian();
        const ForwardTrace trace = forward_trace(net, x);

        double min_pre = std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d + 1 < trace.preacts.size(); ++d)
            for (double v : trace.preacts[d]) min_pre = std::min(min_pre, std::fabs(v));
        double sigma = std::min(1e-3, min_pre / 50.0);

        // shrink sigma until no activation flips occur across the 200 trials
        PerturbationStats stats;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const ToleranceSet tol = chained_tolerances(net, trace, sigma, delta_hat);
            PerturbOptions opts;
            opts.trials = trials;
            opts.compare = &tol;
            Rng mc = rng.split(10000 + 100 * t + attempt);
            stats = empirical_perturbations(net, x, sigma, mc, opts);
            if (stats.trials_with_flips == 0) break;
            sigma *= 0.25;
        }
        if (stats.trials_with_flips != 0) {
            detail = "net " + std::to_string(t) + ": flips persisted at sigma " +
                     std::to_string(sigma);
            return false;
        }
        min_within = std::min(min_within, stats.trials_all_within);
    }
    const auto need = static_cast<std::size_t>(std::ceil((1.0 - delta_hat) * trials));
    detail = "worst trials-within-budget " + std::to_string(min_within) + "/" +
             std::to_string(trials);
    return min_within >= need;
}

// ------------------------------------------------------------------------
// 3. bound structure: exact reductions + depth sweep

bool crit_bound_structure(std::string& detail) {
    // (a) W == Z right after init: KL term vanishes and the bound collapses
    // to train_term + D * sqrt(log(D m / delta) / (m - 1)) exactly
    {
        Rng rng(303);
        const Mlp net = make_mlp_xavier({6, 12, 12, 2}, rng);
        Rng data_rng = rng.split(1);
        const LabeledDataset S =
            gen_gaussian_mixture(30, 6, 2, 2.0, 1.0, data_rng);
        BoundOptions bo;
        bo.gamma_class = 1.0;
        const BoundReport br = thesis_bound(net, S, bo);
        const double D = 3.0, m = 30.0;
        const double expect =
            br.train_term + D * std::sqrt((2.0 * 0.0 + std::log(D * m / bo.delta)) / (m - 1.0));
        if (br.kl_term != 0.0 || br.distance != 0.0 || br.bound_value != expect) {
            detail = "W=Z reduction not exact";
            return false;
        }
    }

    // (b) unit-norm B-term hand case
    {
        const std::size_t D = 3, H = 9;
        TrainNorms n;
        n.D = D;
        n.H = H;
        n.m = 100;
        n.alpha.assign(D, 1.0);
        n.gamma.assign(D, 1.0);
        n.zeta = Matrix(D + 1, D + 1, 1.0);
        n.psi = Matrix(D + 1, D + 1, 1.0);
        n.gamma_class = 1.0;
        n.B = 1.0;
        n.w_row.assign(D + 1, 1.0);
        n.w_spec.assign(D + 1, 1.0);
        const BTerms b = b_terms(n, H, D);
        const double rootH = 3.0;
        const bool hand_ok = std::fabs(b.output - D / rootH) <= 1e-12 &&
                             std::fabs(b.layer_l2 - (D - 1.0)) <= 1e-12 &&
                             std::fabs(b.preact - (D - 1.0) / rootH) <= 1e-12 &&
                             std::fabs(b.jac_row_l2 - (D - 1.0)) <= 1e-12 &&
                             std::fabs(b.jac_spec - (D - 1.0)) <= 1e-12;
        if (!hand_ok) {
            detail = "B-term hand case mismatch";
            return false;
        }
    }

    // (c) depth sweep: log(bound) grows with D, preact variants never exceed main
    ExperimentConfig cfg = parse_experiment_config(R"({
        "kind": "bound-vs-depth",
        "seed": 33,
        "params": {"depth_grid": [3, 5, 8], "m": 500, "width": 40},
        "train": {"lr": 0.05, "batch_size": 32, "max_epochs": 20}
    })");
    cfg.out_dir = "acceptance_out/bound_vs_depth";
    const RunResult r = run_experiment(cfg);
    if (!r.assertions_passed) {
        detail = "depth sweep:";
        for (const std::string& f : r.failed_assertions) detail += " " + f + ";";
        return false;
    }
    const nlohmann::json rep =
        nlohmann::json::parse(slurp(std::filesystem::path(cfg.out_dir) / "report.json"));
    detail = "log-bound slope vs depth " +
             std::to_string(rep.value("log_bound_slope_vs_depth", 0.0));
    return true;
}

// ------------------------------------------------------------------------
// 4. norm growth vs m under label noise

bool crit_norms_vs_m(std::string& detail) {
    ExperimentConfig cfg = parse_experiment_config(R"({
        "kind": "norms-vs-m",
        "seed": 44,
        "params": {"m_grid": [256, 512, 1024, 2048, 4096], "seeds": 5,
                   "label_noise": 0.2, "test_m": 4000, "width": 256,
                   "center_scale": 3.0},
        "train": {"lr": 0.05, "batch_size": 32, "max_epochs": 120,
                  "lr_decay": {"factor": 0.5, "every_n_epochs": 20},
                  "stop_rule": {"kind": "train_acc"}}
    })");
    cfg.out_dir = "acceptance_out/norms_vs_m";
    const RunResult r = run_experiment(cfg);
    if (!r.assertions_passed) {
        detail = "runner assertions failed";
        return false;
    }
    const nlohmann::json rep =
        nlohmann::json::parse(slurp(std::filesystem::path(cfg.out_dir) / "report.json"));
    const double s_dist = rep.at("spearman_distance_vs_m").get<double>();
    const double s_prod = rep.at("spearman_prod_spectral_vs_m").get<double>();
    const std::vector<double> terrs = rep.at("mean_test_error_per_m").get<std::vector<double>>();
    bool nonincreasing = true;
    for (std::size_t i = 1; i < terrs.size(); ++i)
        if (terrs[i] > terrs[i - 1] + 1e-12) nonincreasing = false;
    std::ostringstream ss;
    ss << "spearman(distance)=" << s_dist << " spearman(prod_spec)=" << s_prod
       << " test err " << terrs.front() << "->" << terrs.back();
    detail = ss.str();
    return s_dist >= 0.9 && s_prod >= 0.9 && nonincreasing;
}

// ------------------------------------------------------------------------
// 5. linear uniform-convergence failure

bool crit_linear_uc(std::string& detail) {
    UcParams p;
    p.m = 100;
    p.K = 2;
    p.N = 65536;
    p.eps = 0.05;
    p.delta = 0.05;
    p.test_samples = 2000;
    Rng rng(505);
    const UcReport rep = ucfail_report(UcScenario::Linear, p, 20, rng);
    if (!rep.conditions_ok) {
        detail = "sample-size conditions not satisfied";
        return false;
    }
    std::size_t good_test = 0;
    for (const UcTrial& t : rep.trials) {
        if (t.train_error != 0.0 || t.sprime_error != 1.0) {
            detail = "a trial missed train=0 / sprime=1";
            return false;
        }
        if (t.test_error <= p.eps) ++good_test;
    }
    std::ostringstream ss;
    ss << "test<=eps in " << good_test << "/20, eps_unif_alg lower bound "
       << rep.epsilon_lower_bound;
    detail = ss.str();
    return good_test >= 19 && rep.epsilon_lower_bound >= 0.95;
}

// ------------------------------------------------------------------------
// 6. exponential-activation failure, log-domain arithmetic

bool crit_exp_uc(std::string& detail) {
    // closed form vs the random-feature MC oracle at tiny scale
    {
        Rng rng(606);
        const LabeledDataset S = gen_exp(3, 2, rng);
        const ExpModel model = make_exp_model(S);
        Rng probe_rng = rng.split(7);
        const LabeledDataset probe = gen_exp(1, 2, probe_rng);
        const SignedLog closed = exp_eval(model, probe.inputs[0]);
        Rng mc_rng = rng.split(9);
        const SignedLog mc =
            oracle::exp_eval_mc(S, probe.inputs[0], 10'000'000, mc_rng);
        if (closed.sign != mc.sign) {
            detail = "MC oracle sign mismatch";
            return false;
        }
        const double rel =
            std::fabs(closed.log_mag - mc.log_mag) / std::fabs(closed.log_mag);
        if (rel > 0.03) {
            detail = "MC oracle log-magnitude rel err " + std::to_string(rel);
            return false;
        }
    }

    UcParams p;
    p.m = 40;
    p.N = 8000;
    p.eps = 0.2;
    p.delta = 0.2;
    p.test_samples = 1000;
    Rng rng(616);
    const UcReport rep = ucfail_report(UcScenario::Exp, p, 3, rng);
    if (!rep.conditions_ok) {
        detail = "sample-size conditions not satisfied";
        return false;
    }
    for (const UcTrial& t : rep.trials) {
        if (t.train_error != 0.0 || t.sprime_error != 1.0) {
            detail = "a trial missed train=0 / sprime=1";
            return false;
        }
        if (!std::isfinite(t.test_error) || !std::isfinite(t.min_train_margin)) {
            detail = "overflow: non-finite trial statistics";
            return false;
        }
    }
    std::ostringstream ss;
    ss << "mean MC test error " << rep.mean_test_error;
    detail = ss.str();
    return rep.mean_test_error <= p.eps;
}

// ------------------------------------------------------------------------
// 7. hypersphere failure at trained-net scale

bool crit_hypersphere_uc(std::string& detail) {
    const auto run_m = [](std::size_t m, std::size_t epochs, std::uint64_t seed) {
        UcParams p;
        p.m = m;
        p.dim = 100;
        p.width = 4096;
        p.r_in = 1.0;
        p.r_out = 1.1;
        p.augment = 1.0;
        p.test_samples = 2000;
        p.train.lr = 0.1;
        p.train.momentum = 0.9;
        p.train.batch_size = 64;
        p.train.init_scale = 1.5;
        p.train.max_epochs = epochs;
        p.train.stop.kind = StopRuleKind::MaxEpochs;
        Rng rng(seed);
        return ucfail_report(UcScenario::Hypersphere, p, 10, rng);
    };
    const UcReport small = run_m(512, 50, 707);
    const UcReport large = run_m(2048, 30, 717);

    const auto count_ratio = [](const UcReport& rep) {
        std::size_t ok = 0;
        for (const UcTrial& t : rep.trials)
            if (t.sprime_error >= 3.0 * t.test_error && t.sprime_error > 0.0) ++ok;
        return ok;
    };
    const std::size_t ok_small = count_ratio(small);
    const std::size_t ok_large = count_ratio(large);
    std::ostringstream ss;
    ss << "sprime>=3x test in " << ok_small << "/10 (m=512) and " << ok_large
       << "/10 (m=2048); mean test " << small.mean_test_error << " -> "
       << large.mean_test_error;
    detail = ss.str();
    return ok_small >= 8 && ok_large >= 8 &&
           large.mean_test_error < small.mean_test_error;
}

// ------------------------------------------------------------------------
// 8. disagreement / calibration identities and the scaled GDE band

PredictionTable random_table(Rng& rng, std::size_t M, std::size_t n, std::size_t K) {
    PredictionTable t;
    t.models = M;
    t.examples = n;
    t.K = K;
    t.pred.resize(M * n);
    t.labels.resize(n);
    t.has_labels = true;
    for (int& v : t.pred) v = static_cast<int>(rng.uniform() * K) % static_cast<int>(K);
    for (int& v : t.labels) v = static_cast<int>(rng.uniform() * K) % static_cast<int>(K);
    return t;
}

bool crit_gde_identities(std::string& detail) {
    Rng rng(808);
    for (int s = 0; s < 100; ++s) {
        const std::size_t M = 2 + static_cast<std::size_t>(rng.uniform() * 15.0);
        const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 40.0);
        const std::size_t K = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
        const PredictionTable t = random_table(rng, M, n, K);
        const ConfidenceProfile prof = confidence_profile(t);
        const double edr = expected_disagreement(prof);
        const double pair = oracle::pair_average_disagreement(t);
        // both equal the integer ordered-pair disagreement count over n*M^2;
        // compare on that integer so the identity is checked with zero tolerance
        long long count = 0;
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<long long> c(K, 0);
            for (std::size_t i = 0; i < M; ++i) ++c[static_cast<std::size_t>(t.at(i, x))];
            for (long long ck : c) count += ck * (static_cast<long long>(M) - ck);
        }
        const double scale = static_cast<double>(n) * static_cast<double>(M * M);
        if (std::llround(edr * scale) != count || std::llround(pair * scale) != count) {
            detail = "EDR / pair-average identity broke at seed " + std::to_string(s);
            return false;
        }
    }

    // the 0.1/0.2 two-example fixture: EDR = 2*(0.1*0.9 + 0.2*0.8)/2 = 0.25
    {
        PredictionTable t;
        t.models = 10;
        t.examples = 2;
        t.K = 2;
        t.pred.assign(20, 1);
        t.at(0, 0) = 0;
        t.at(0, 1) = 0;
        t.at(1, 1) = 0;
        const double edr = expected_disagreement(confidence_profile(t));
        if (std::fabs(edr - 0.25) > 1e-15) {
            detail = "fixture EDR " + std::to_string(edr) + " != 0.25";
            return false;
        }
    }
    return true;
}

bool crit_gde_deviation(std::string& detail) {
    Rng rng(818);
    double worst_slack = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 100; ++s) {
        const std::size_t M = 2 + static_cast<std::size_t>(rng.uniform() * 15.0);
        const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 40.0);
        const std::size_t K = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
        const PredictionTable t = random_table(rng, M, n, K);
        const ConfidenceProfile prof = confidence_profile(t);
        const double ete = expected_test_error(prof, t.labels);
        const double edr = expected_disagreement(prof);
        const double bound = cace_exact(prof, t.labels).value;
        const double gap = std::fabs(ete - edr);
        worst_slack = std::max(worst_slack, gap - bound);
        if (gap > bound + 1e-12) {
            detail = "|ETE-EDR| exceeded exact-bin CACE at seed " + std::to_string(s);
            return false;
        }
    }
    std::ostringstream ss;
    ss << "worst gap-minus-CACE " << worst_slack;
    detail = ss.str();
    return true;
}

bool crit_gde_band(std::string& detail) {
    Rng rng(828);
    Rng data_rng = rng.split(1);
    LabeledDataset S = gen_hypersphere(2000, 25, 1.0, 1.1, data_rng);
    Rng test_rng = rng.split(2);
    LabeledDataset T = gen_hypersphere(2000, 25, 1.0, 1.1, test_rng);
    for (Vector& x : S.inputs) x.push_back(1.0);
    for (Vector& x : T.inputs) x.push_back(1.0);
    const std::vector<std::size_t> arch{S.dim(), 256, 2};

    const auto predict = [&](const Mlp& net, const Vector& x) {
        const Vector g = forward_logits(net, x);
        return g[0] >= g[1] ? 0 : 1;
    };

    std::size_t in_band = 0;
    std::ostringstream ratios;
    for (int pair = 0; pair < 10; ++pair) {
        TrainConfig cfg;
        cfg.lr = 0.1;
        cfg.momentum = 0.9;
        cfg.batch_size = 64;
        cfg.init_scale = 1.0;
        cfg.max_epochs = 60;
        cfg.stop.kind = StopRuleKind::MaxEpochs;
        cfg.seed_init = rng.split(100 + pair).seed();
        cfg.seed_order = rng.split(200 + pair).seed();
        const auto [a, b] = make_run_pair(arch, S, cfg, StochasticityMode::DiffInit);

        std::size_t differ = 0;
        for (const Vector& x : T.inputs)
            if (predict(a, x) != predict(b, x)) ++differ;
        const double dis = static_cast<double>(differ) / static_cast<double>(T.size());
        const double err = 0.5 * (dataset_error(a, T) + dataset_error(b, T));
        const double ratio = dis > 0.0 ? err / dis : std::numeric_limits<double>::infinity();
        ratios << (pair ? " " : "") << std::round(ratio * 100.0) / 100.0;
        if (err > 0.7 * dis && err < 1.3 * dis) ++in_band;
    }
    detail = "in band " + std::to_string(in_band) + "/10; err/dis ratios: " + ratios.str();
    return in_band >= 8;
}

bool crit_gde(std::string& detail) {
    std::string d1, d2, d3;
    const bool a = crit_gde_identities(d1);
    const bool b = crit_gde_deviation(d2);
    const bool c = crit_gde_band(d3);
    detail = "(a) " + (d1.empty() ? std::string(a ? "ok" : "failed") : d1) + "; (b) " +
             (d2.empty() ? std::string(b ? "ok" : "failed") : d2) + "; (c) " +
             (d3.empty() ? std::string(c ? "ok" : "failed") : d3);
    return a && b && c;
}

// ------------------------------------------------------------------------
// 9. byte-identical reruns

bool crit_determinism(std::string& detail) {
    const std::vector<std::string> fixtures = {
        R"({"kind":"margin-gap","seed":9,"out_dir":"acceptance_out/det_margin",
            "params":{"m_grid":[64,128],"test_m":200,"width":8},
            "train":{"lr":0.1,"batch_size":16,"max_epochs":5}})",
        R"({"kind":"interp","seed":9,"out_dir":"acceptance_out/det_interp",
            "params":{"m":64,"steps":5,"width":8,"modes":["diff-init","diff-order"]},
            "train":{"lr":0.1,"batch_size":16,"max_epochs":5}})",
        R"({"kind":"gde-scatter","seed":9,"out_dir":"acceptance_out/det_gde",
            "params":{"pairs":2,"m":64,"test_m":200,"width":8},
            "train":{"lr":0.1,"batch_size":16,"max_epochs":8}})"};
    for (const std::string& text : fixtures) {
        const ExperimentConfig cfg = parse_experiment_config(text);
        run_experiment(cfg);
        const std::string csv1 = slurp(std::filesystem::path(cfg.out_dir) / "results.csv");
        const std::string json1 = slurp(std::filesystem::path(cfg.out_dir) / "report.json");
        run_experiment(cfg);
        const std::string csv2 = slurp(std::filesystem::path(cfg.out_dir) / "results.csv");
        const std::string json2 = slurp(std::filesystem::path(cfg.out_dir) / "report.json");
        if (csv1.empty() || json1.empty() || csv1 != csv2 || json1 != json2) {
            detail = "rerun differed for " + cfg.kind;
            return false;
        }
    }
    detail = std::to_string(fixtures.size()) + " fixture experiments byte-identical";
    return true;
}

}  // namespace

int main() {
    std::filesystem::remove_all("acceptance_out");
    std::filesystem::create_directories("acceptance_out");

    run_criterion(1, "numeric kernels vs oracles", crit_numerics);
    run_criterion(2, "noise-resilience budgets", crit_noise);
    run_criterion(3, "bound structure and depth sweep", crit_bound_structure);
    run_criterion(4, "norm growth vs m", crit_norms_vs_m);
    run_criterion(5, "linear UC failure", crit_linear_uc);
    run_criterion(6, "exponential UC failure", crit_exp_uc);
    run_criterion(7, "hypersphere UC failure", crit_hypersphere_uc);
    run_criterion(8, "disagreement and calibration", crit_gde);
    run_criterion(9, "determinism", crit_determinism);

    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
