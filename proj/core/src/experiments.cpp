#include "genlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "genlab/bounds.hpp"
#include "genlab/datagen.hpp"
#include "genlab/errors.hpp"
#include "genlab/gde.hpp"
#include "genlab/svg.hpp"
#include "genlab/ucfail.hpp"

namespace genlab {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kExperimentKinds = {
    "norms-vs-m",     "bound-vs-depth",     "margin-gap", "interp",
    "ucfail-linear",  "ucfail-hypersphere", "ucfail-exp", "gde-scatter"};

// ---------------------------------------------------------------- config ---

ExperimentConfig parse_experiment_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("config: top level must be a JSON object");
    ExperimentConfig cfg;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw InvalidInput("config: field 'kind' (string) is required");
    cfg.kind = j["kind"].get<std::string>();
    cfg.out_dir = j.value("out_dir", std::string("out"));
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.threads = j.value("threads", std::size_t{1});
    cfg.deterministic = j.value("deterministic", true);
    cfg.params = j.value("params", json::object());
    if (j.contains("train")) cfg.train = train_config_from_json(j["train"].dump());
    cfg.canonical = j.dump();  // nlohmann objects iterate in sorted key order
    validate_experiment_config(cfg);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config file not found: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

void validate_experiment_config(const ExperimentConfig& cfg) {
    if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), cfg.kind) ==
        kExperimentKinds.end()) {
        std::string kinds;
        for (const auto& k : kExperimentKinds) kinds += (kinds.empty() ? "" : ", ") + k;
        throw InvalidInput("config: unknown kind '" + cfg.kind + "' (expected one of " +
                           kinds + ")");
    }
    if (cfg.out_dir.empty()) throw InvalidInput("config: field 'out_dir' must be non-empty");
    if (!cfg.params.is_object()) throw InvalidInput("config: field 'params' must be an object");
    if (cfg.threads == 0) throw InvalidInput("config: field 'threads' must be >= 1");
    for (auto it = cfg.params.begin(); it != cfg.params.end(); ++it) {
        const json& v = it.value();
        if (v.is_number() && v.get<double>() < 0.0)
            throw InvalidInput("config: params." + it.key() + " must be nonnegative");
    }
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : cfg.canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ----------------------------------------------------------------- stats ---

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;  // ties share ranks
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mean_rank;
        i = j + 1;
    }
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InvalidInput("spearman: need two equal-length series of size >= 2");
    return pearson(ranks(xs), ranks(ys));
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InvalidInput("fitted_slope: need two equal-length series of size >= 2");
    const std::size_t n = xs.size();
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw InvalidInput("fitted_slope: x values are constant");
    return sxy / sxx;
}

// -------------------------------------------------------------- plumbing ---

namespace {

struct Emitter {
    const ExperimentConfig& cfg;
    fs::path dir;
    RunResult result;
    json report;

    explicit Emitter(const ExperimentConfig& c) : cfg(c), dir(c.out_dir) {
        fs::create_directories(dir);
        result.out_dir = dir.string();
        report["kind"] = c.kind;
        report["seed"] = c.seed;
        report["config_hash"] = config_hash(c);
        report["rng"] = Rng::algorithm();
    }

    std::string meta() const {
        return "# config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.seed);
    }

    void csv(const std::string& header, const std::vector<std::string>& rows) {
        const fs::path p = dir / "results.csv";
        std::ofstream out(p, std::ios::binary);
        if (!out) throw InvalidInput("cannot open " + p.string());
        out << header << "\n";
        for (const auto& r : rows) out << r << "\n";
        out << meta() << "\n";
        result.artifacts.push_back(p.string());
    }

    void svg(const SvgPlot& plot, const std::string& name) {
        const fs::path p = dir / name;
        plot.save(p.string());
        result.artifacts.push_back(p.string());
    }

    void check(bool ok, const std::string& what) {
        if (!ok) {
            result.assertions_passed = false;
            result.failed_assertions.push_back(what);
        }
    }

    RunResult finish() {
        report["assertions_passed"] = result.assertions_passed;
        report["failed_assertions"] = result.failed_assertions;
        const fs::path p = dir / "report.json";
        std::ofstream out(p, std::ios::binary);
        if (!out) throw InvalidInput("cannot open " + p.string());
        out << report.dump(2) << "\n";
        result.artifacts.push_back(p.string());
        return result;
    }
};

std::string fmtrow(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmtrow(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// Shared synthetic two-class task used by the sweep experiments.
LabeledDataset mixture_task(const json& p, std::size_t m, Rng& rng) {
    const auto dim = p.value("dim", std::size_t{20});
    const auto classes = p.value("classes", std::size_t{2});
    const double center = p.value("center_scale", 2.0);
    const double sigma = p.value("noise_sigma", 1.0);
    const auto center_seed = p.value("center_seed", std::uint64_t{0x6d785eedULL});
    return gen_gaussian_mixture(m, dim, classes, center, sigma, rng, center_seed);
}

LabeledDataset sphere_task(const json& p, std::size_t m, Rng& rng) {
    const auto dim = p.value("dim", std::size_t{25});
    const double r_in = p.value("r_in", 1.0), r_out = p.value("r_out", 1.1);
    const double aug = p.value("augment", 1.0);
    LabeledDataset d = gen_hypersphere(m, dim, r_in, r_out, rng);
    if (aug != 0.0)
        for (Vector& x : d.inputs) x.push_back(aug);
    return d;
}

LabeledDataset data_task(const json& p, std::size_t m, Rng& rng) {
    const std::string kind = p.value("data", std::string("mixture"));
    if (kind == "mixture") return mixture_task(p, m, rng);
    if (kind == "hypersphere") return sphere_task(p, m, rng);
    throw InvalidInput("config: params.data must be 'mixture' or 'hypersphere'");
}

std::vector<std::size_t> arch_for(const json& p, std::size_t dim, std::size_t classes,
                                  std::size_t depth) {
    const auto width = p.value("width", std::size_t{64});
    std::vector<std::size_t> arch{dim};
    for (std::size_t d = 1; d < depth; ++d) arch.push_back(width);
    arch.push_back(classes);
    return arch;
}

TrainConfig derive_train(const ExperimentConfig& cfg, Rng& rng) {
    TrainConfig tc = cfg.train;
    tc.seed_init = rng.split(1).seed();
    tc.seed_order = rng.split(2).seed();
    return tc;
}

// ------------------------------------------------------------- runners ---

RunResult run_norms_vs_m(const ExperimentConfig& cfg) {
    Emitter em(cfg);
    const json& p = cfg.params;
    const std::vector<std::size_t> m_grid =
        p.value("m_grid", std::vector<std::size_t>{256, 512, 1024, 2048, 4096});
    const auto n_seeds = p.value("seeds", std::size_t{5});
    const double noise = p.value("label_noise", 0.2);
    const auto test_m = p.value("test_m", std::size_t{2000});
    const auto depth = p.value("depth", std::size_t{2});
    const double gamma = p.value("gamma", 1.0);
    const auto classes = p.value("classes", std::size_t{2});

    Rng base(cfg.seed);
    Rng test_rng = base.split(0xE57);
    const LabeledDataset test = data_task(p, test_m, test_rng);

    std::vector<std::string> rows;
    std::ostringstream header;
    header << "m,seed,distance_from_init,prod_spectral,train_error,test_error,"
              "thesis_bound,neyshabur18,bartlett17";
    for (std::size_t d = 1; d <= depth; ++d) header << ",spec_w" << d;
    std::vector<double> ms, dists, prods, terrs;

    for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
        const std::size_t m = m_grid[mi];
        double mean_dist = 0, mean_prod = 0, mean_terr = 0;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            Rng run_rng = base.split(1000 * (mi + 1) + s);
            Rng data_rng = run_rng.split(0);
            LabeledDataset S = data_task(p, m, data_rng);
            if (noise > 0.0) {
                Rng noise_rng = run_rng.split(3);
                S = corrupt_labels(S, noise, classes, noise_rng);
            }
            Mlp net = make_mlp(arch_for(p, S.dim(), classes, depth));
            const TrainConfig tc = derive_train(cfg, run_rng);
            sgd_train(net, S, tc);

            const double dist = distance_from_init(net);
            double prod = 1.0;
            std::vector<double> specs;
            for (const Matrix& W : net.weights) {
                specs.push_back(spectral_norm(W));
                prod *= specs.back();
            }
            const double train_err = dataset_error(net, S);
            const double test_err = dataset_error(net, test);
            BoundOptions bo;
            bo.gamma_class = gamma;
            const BoundReport br = thesis_bound(net, S, bo);
            double B = 0.0;
            for (const auto& x : S.inputs) B = std::max(B, l2_norm(x));
            const std::size_t H =
                *std::max_element(net.widths.begin() + 1, net.widths.end() - 1);
            const double ney = neyshabur18_bound(net, gamma, m, B, H, depth);
            const double bar = bartlett17_bound(net, gamma, m, B, H, depth);

            std::string row = fmtrow("%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                                     m, s, dist, prod, train_err, test_err,
                                     br.bound_value, ney, bar);
            for (double sv : specs) row += fmtrow(",%.17g", sv);
            rows.push_back(std::move(row));
            mean_dist += dist;
            mean_prod += prod;
            mean_terr += test_err;
        }
        ms.push_back(static_cast<double>(m));
        dists.push_back(mean_dist / n_seeds);
        prods.push_back(mean_prod / n_seeds);
        terrs.push_back(mean_terr / n_seeds);
    }
    em.csv(header.str(), rows);

    em.report["spearman_distance_vs_m"] = spearman(ms, dists);
    em.report["spearman_prod_spectral_vs_m"] = spearman(ms, prods);
    em.report["spearman_test_error_vs_m"] = spearman(ms, terrs);
    em.report["mean_distance_per_m"] = dists;
    em.report["mean_prod_spectral_per_m"] = prods;
    em.report["mean_test_error_per_m"] = terrs;
    em.check(spearman(ms, dists) > 0.0, "distance_from_init not increasing with m");
    em.check(spearman(ms, terrs) < 1.0, "test error degenerate across m");

    SvgPlot plot;
    plot.title = "Norms and test error vs training set size";
    plot.x_label = "m";
    plot.y_label = "value";
    plot.series.push_back({"distance_from_init", ms, dists, "#1f6fb2", true});
    plot.series.push_back({"prod_spectral", ms, prods, "#c23b22", true});
    plot.series.push_back({"test_error", ms, terrs, "#2e8540", true});
    em.svg(plot, "norms_vs_m.svg");
    return em.finish();
}

RunResult run_bound_vs_depth(const ExperimentConfig& cfg) {
    Emitter em(cfg);
    const json& p = cfg.params;
    const std::vector<std::size_t> depth_grid =
        p.value("depth_grid", std::vector<std::size_t>{3, 5, 8});
    const auto m = p.value("m", std::size_t{500});
    const double gamma = p.value("gamma", 1.0);
    const double pct = p.value("pct", 0.05);
    const auto classes = p.value("classes", std::size_t{2});

    Rng base(cfg.seed);
    std::vector<std::string> rows;
    std::vector<double> ds, log_bounds;
    bool variants_ok = true;

    for (std::size_t di = 0; di < depth_grid.size(); ++di) {
        const std::size_t D = depth_grid[di];
        Rng run_rng = base.split(di + 1);
        Rng data_rng = run_rng.split(0);
        LabeledDataset S = data_task(p, m, data_rng);
        Mlp net = make_mlp(arch_for(p, S.dim(), classes, D));
        const TrainConfig tc = derive_train(cfg, run_rng);
        sgd_train(net, S, tc);

        const TrainNorms norms = train_norm_profile(net, S);
        BoundOptions bo;
        bo.gamma_class = gamma;
        bo.pct = pct;
        const BoundReport main = thesis_bound_from_norms(net, S, norms, bo);
        bo.variant = BoundVariant::Cheap;
        const BoundReport cheap = thesis_bound_from_norms(net, S, norms, bo);
        bo.variant = BoundVariant::PreactPct;
        const BoundReport vpct = thesis_bound_from_norms(net, S, norms, bo);
        bo.variant = BoundVariant::PreactMedian;
        const BoundReport vmed = thesis_bound_from_norms(net, S, norms, bo);

        for (const BoundReport* br : {&main, &cheap, &vpct, &vmed})
            rows.push_back(fmtrow("%zu,%s,%.17g,%.17g,%.17g,%.17g,%d", D,
                                  br->variant.c_str(), br->bound_value,
                                  std::log(br->bound_value), br->sigma_star, br->kl_term,
                                  br->infinite ? 1 : 0));
        if (!main.infinite) {
            ds.push_back(static_cast<double>(D));
            log_bounds.push_back(std::log(main.bound_value));
            if (!vpct.infinite && vpct.bound_value > main.bound_value * (1 + 1e-9))
                variants_ok = false;
            if (!vmed.infinite && vmed.bound_value > main.bound_value * (1 + 1e-9))
                variants_ok = false;
        }
    }
    em.csv("depth,variant,bound,log_bound,sigma_star,kl_term,infinite", rows);

    em.check(ds.size() >= 2, "fewer than two finite main bounds across depths");
    if (ds.size() >= 2) {
        const double slope = fitted_slope(ds, log_bounds);
        em.report["log_bound_slope_vs_depth"] = slope;
        em.check(slope > 0.0, "log(bound) does not increase with depth");
    }
    em.check(variants_ok, "a preactivation variant exceeded the main bound");
    em.report["depths_finite"] = ds;
    em.report["log_bounds"] = log_bounds;

    SvgPlot plot;
    plot.title = "Thesis bound vs depth";
    plot.x_label = "depth D";
    plot.y_label = "bound";
    plot.log_y = true;
    std::vector<double> bvals(log_bounds.size());
    std::transform(log_bounds.begin(), log_bounds.end(), bvals.begin(),
                   [](double lb) { return std::exp(lb); });
    plot.series.push_back({"main", ds, bvals, "#1f6fb2", true});
    em.svg(plot, "bound_vs_depth.svg");
    return em.finish();
}

RunResult run_margin_gap(const ExperimentConfig& cfg) {
    Emitter em(cfg);
    const json& p = cfg.params;
    const std::vector<std::size_t> m_grid =
        p.value("m_grid", std::vector<std::size_t>{256, 512, 1024, 2048});
    const auto test_m = p.value("test_m", std::size_t{2000});
    const auto depth = p.value("depth", std::size_t{2});
    const auto classes = p.value("classes", std::size_t{2});

    Rng base(cfg.seed);
    Rng test_rng = base.split(0xE57);
    const LabeledDataset test = data_task(p, test_m, test_rng);

    std::vector<std::string> rows;
    std::vector<double> ms, gaps;
    for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
        const std::size_t m = m_grid[mi];
        Rng run_rng = base.split(mi + 1);
        Rng data_rng = run_rng.split(0);
        LabeledDataset S = data_task(p, m, data_rng);
        Mlp net = make_mlp(arch_for(p, S.dim(), classes, depth));
        sgd_train(net, S, derive_train(cfg, run_rng));
        const double train_margin = mean_margin(net, S);
        const double test_margin = mean_margin(net, test);
        const double gap = train_margin - test_margin;
        rows.push_back(fmtrow("%zu,%.17g,%.17g,%.17g", m, train_margin, test_margin, gap));
        ms.push_back(static_cast<double>(m));
        gaps.push_back(gap);
    }
    em.csv("m,mean_train_margin,mean_test_margin,gap", rows);
    em.report["spearman_gap_vs_m"] = spearman(ms, gaps);
    em.report["gaps"] = gaps;

    SvgPlot plot;
    plot.title = "Train/test margin gap vs m";
    plot.x_label = "m";
    plot.y_label = "margin gap";
    plot.series.push_back({"gap", ms, gaps, "#1f6fb2", true});
    em.svg(plot, "margin_gap.svg");
    return em.finish();
}

StochasticityMode mode_from_string(const std::string& s) {
    if (s == "all-diff") return StochasticityMode::AllDiff;
    if (s == "diff-data") return StochasticityMode::DiffData;
    if (s == "diff-init") return StochasticityMode::DiffInit;
    if (s == "diff-order") return StochasticityMode::DiffOrder;
    throw InvalidInput("unknown stochasticity mode '" + s + "'");
}

RunResult run_interp(const ExperimentConfig& cfg) {
    Emitter em(cfg);
    const json& p = cfg.params;
    const auto m = p.value("m", std::size_t{400});
    const auto steps = p.value("steps", std::size_t{21});
    const auto depth = p.value("depth", std::size_t{2});
    const auto classes = p.value("classes", std::size_t{2});
    const std::vector<std::string> modes = p.value(
        "modes",
        std::vector<std::string>{"all-diff", "diff-data", "diff-init", "diff-order"});

    Rng base(cfg.seed);
    Rng data_rng = base.split(0);
    const LabeledDataset S = data_task(p, m, data_rng);

    std::vector<std::string> rows;
    SvgPlot plot;
    plot.title = "0-1 error along the weight interpolation path";
    plot.x_label = "t";
    plot.y_label = "train error";
    const std::vector<std::string> palette = {"#1f6fb2", "#c23b22", "#2e8540", "#8a5fbf"};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        Rng run_rng = base.split(i + 1);
        TrainConfig tc = derive_train(cfg, run_rng);
        auto [n1, n2] = make_run_pair(arch_for(p, S.dim(), classes, depth), S, tc,
                                      mode_from_string(modes[i]));
        SvgSeries series;
        series.name = modes[i];
        series.color = palette[i % palette.size()];
        series.line = true;
        for (const auto& [t, err] : interpolate_error(n1, n2, S, steps)) {
            rows.push_back(fmtrow("%s,%.17g,%.17g", modes[i].c_str(), t, err));
            series.x.push_back(t);
            series.y.push_back(err);
        }
        plot.series.push_back(std::move(series));
    }
    em.csv("mode,t,error", rows);
    em.svg(plot, "interp.svg");
    return em.finish();
}

RunResult run_ucfail(const ExperimentConfig& cfg, UcScenario scenario) {
    Emitter em(cfg);
    const json& p = cfg.params;
    UcParams up;
    up.m = p.value("m", scenario == UcScenario::Exp ? std::size_t{40} : std::size_t{100});
    up.K = p.value("K", std::size_t{2});
    up.N = p.value("N", std::size_t{0});
    up.eps = p.value("eps", 0.05);
    up.delta = p.value("delta", 0.05);
    up.test_samples = p.value("test_samples", std::size_t{10000});
    up.dim = p.value("dim", std::size_t{100});
    up.width = p.value("width", std::size_t{4096});
    up.augment = p.value("augment", 1.0);
    up.train = cfg.train;
    const auto trials = p.value("trials", std::size_t{20});
    if (scenario != UcScenario::Hypersphere && up.N == 0)
        throw InvalidInput("config: params.N is required for this scenario");

    Rng rng(cfg.seed);
    const UcReport rep = ucfail_report(scenario, up, trials, rng);

    std::vector<std::string> rows;
    for (std::size_t i = 0; i < rep.trials.size(); ++i)
        rows.push_back(fmtrow("%zu,%.17g,%.17g,%.17g,%.17g", i, rep.trials[i].train_error,
                              rep.trials[i].test_error, rep.trials[i].sprime_error,
                              rep.trials[i].min_train_margin));
    em.csv("trial,train_error,test_error,sprime_error,min_train_margin", rows);
    em.report["uc"] = json::parse(rep.to_json());
    if (scenario != UcScenario::Hypersphere) {
        em.check(rep.conditions_ok, "sample-size conditions not satisfied");
        bool interpolates = true;
        for (const UcTrial& t : rep.trials)
            if (t.train_error != 0.0) interpolates = false;
        em.check(interpolates, "a trial failed to interpolate the training set");
        em.check(rep.frac_sprime_full == 1.0, "S' was not fully misclassified in a trial");
    }

    SvgPlot plot;
    plot.title = "Uniform-convergence failure: per-trial errors";
    plot.x_label = "trial";
    plot.y_label = "error";
    SvgSeries test_s{"test_error", {}, {}, "#1f6fb2", false};
    SvgSeries bad_s{"sprime_error", {}, {}, "#c23b22", false};
    for (std::size_t i = 0; i < rep.trials.size(); ++i) {
        test_s.x.push_back(static_cast<double>(i));
        test_s.y.push_back(rep.trials[i].test_error);
        bad_s.x.push_back(static_cast<double>(i));
        bad_s.y.push_back(rep.trials[i].sprime_error);
    }
    plot.series.push_back(std::move(test_s));
    plot.series.push_back(std::move(bad_s));
    em.svg(plot, "ucfail.svg");
    return em.finish();
}

RunResult run_gde_scatter(const ExperimentConfig& cfg) {
    Emitter em(cfg);
    const json& p = cfg.params;
    const auto pairs = p.value("pairs", std::size_t{10});
    const auto m = p.value("m", std::size_t{200});
    const auto test_m = p.value("test_m", std::size_t{1000});
    const auto depth = p.value("depth", std::size_t{2});
    const auto classes = p.value("classes", std::size_t{2});
    const std::string mode_str = p.value("mode", std::string("diff-init"));
    const StochasticityMode mode = mode_from_string(mode_str);

    Rng base(cfg.seed);
    Rng data_rng = base.split(0);
    const LabeledDataset S = data_task(p, m, data_rng);
    Rng test_rng = base.split(0xE57);
    const LabeledDataset test = data_task(p, test_m, test_rng);

    PredictionTable table;
    table.models = 2 * pairs;
    table.examples = test.size();
    table.K = classes;
    table.pred.resize(table.models * table.examples);
    table.labels = test.labels;
    table.has_labels = true;

    auto predict_into = [&](const Mlp& net, std::size_t model) {
        for (std::size_t e = 0; e < test.size(); ++e) {
            const Vector logits = forward_logits(net, test.inputs[e]);
            table.at(model, e) = static_cast<int>(
                std::max_element(logits.begin(), logits.end()) - logits.begin());
        }
    };

    std::vector<GdeScatterRow> scatter;
    std::vector<std::string> rows;
    std::size_t in_band = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        Rng run_rng = base.split(i + 1);
        TrainConfig tc = derive_train(cfg, run_rng);
        auto [n1, n2] = make_run_pair(arch_for(p, S.dim(), classes, depth), S, tc, mode);
        predict_into(n1, 2 * i);
        predict_into(n2, 2 * i + 1);
        const double dis = disagreement_rate(table, 2 * i, 2 * i + 1);
        const double terr =
            0.5 * (test_error(table, 2 * i) + test_error(table, 2 * i + 1));
        scatter.push_back({dis, terr, mode_str});
        rows.push_back(fmtrow("%.17g,%.17g,%s", dis, terr, mode_str.c_str()));
        if (dis > 0.0 && terr > 0.7 * dis && terr < 1.3 * dis) ++in_band;
    }
    em.csv("disagreement,test_error,mode", rows);

    const GdeReport gr = gde_report(table);
    em.report["gde"] = json::parse(gr.to_json());
    em.report["pairs_in_band"] = in_band;
    em.check(deviation_check(gr), "|ETE - EDR| exceeded CACE with exact bins");

    SvgPlot plot;
    plot.title = "Disagreement vs test error (" + mode_str + ")";
    plot.x_label = "disagreement";
    plot.y_label = "test error";
    plot.diagonal = true;
    SvgSeries s{mode_str, {}, {}, "#1f6fb2", false};
    for (const auto& r : scatter) {
        s.x.push_back(r.disagreement);
        s.y.push_back(r.test_error);
    }
    plot.series.push_back(std::move(s));
    em.svg(plot, "gde_scatter.svg");
    return em.finish();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentConfig eff = cfg;
    if (const char* env = std::getenv("GENLAB_OUT"); env && *env) eff.out_dir = env;
    if (eff.kind == "norms-vs-m") return run_norms_vs_m(eff);
    if (eff.kind == "bound-vs-depth") return run_bound_vs_depth(eff);
    if (eff.kind == "margin-gap") return run_margin_gap(eff);
    if (eff.kind == "interp") return run_interp(eff);
    if (eff.kind == "ucfail-linear") return run_ucfail(eff, UcScenario::Linear);
    if (eff.kind == "ucfail-hypersphere") return run_ucfail(eff, UcScenario::Hypersphere);
    if (eff.kind == "ucfail-exp") return run_ucfail(eff, UcScenario::Exp);
    if (eff.kind == "gde-scatter") return run_gde_scatter(eff);
    throw InvalidInput("config: unknown kind '" + eff.kind + "'");
}

std::string summarize_directory(const std::string& dir) {
    const fs::path rp = fs::path(dir) / "report.json";
    std::ifstream in(rp);
    if (!in) throw InvalidInput("no report.json in " + dir);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed report.json in " + dir + ": " + e.what());
    }
    std::ostringstream out;
    out << "experiment: " << j.value("kind", std::string("?")) << "\n";
    out << "seed: " << j.value("seed", std::uint64_t{0}) << "\n";
    out << "config_hash: " << j.value("config_hash", std::string("?")) << "\n";
    out << "assertions_passed: " << (j.value("assertions_passed", false) ? "yes" : "no")
        << "\n";
    if (j.contains("failed_assertions"))
        for (const auto& f : j["failed_assertions"])
            out << "  failed: " << f.get<std::string>() << "\n";
    out << "artifacts:\n";
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    for (const auto& n : names) out << "  " << n << "\n";
    return out.str();
}

}  // namespace genlab
