#include "genlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "genlab/errors.hpp"

namespace genlab {

namespace {

std::size_t formula_width(const Mlp& net) {
    std::size_t h = 1;
    for (std::size_t d = 1; d < net.widths.size(); ++d) h = std::max(h, net.widths[d]);
    return h;
}

}  // namespace

double BTerms::max_term() const {
    return std::max({layer_l2, preact, jac_row_l2, jac_spec, output});
}

const char* to_string(BoundVariant v) {
    switch (v) {
        case BoundVariant::Main: return "main";
        case BoundVariant::Cheap: return "cheap";
        case BoundVariant::PreactPct: return "preact_pct";
        case BoundVariant::PreactMedian: return "preact_median";
    }
    return "?";
}

double distance_from_init(const Mlp& net) {
    double s = 0.0;
    for (double layer : distance_from_init_layers(net)) s += layer * layer;
    return std::sqrt(s);
}

std::vector<double> distance_from_init_layers(const Mlp& net) {
    std::vector<double> out;
    for (std::size_t d = 0; d < net.depth(); ++d) {
        double s = 0.0;
        const Matrix& W = net.weights[d];
        const Matrix& Z = net.init_snapshot[d];
        for (std::size_t k = 0; k < W.data.size(); ++k) {
            const double diff = W.data[k] - Z.data[k];
            s += diff * diff;
        }
        out.push_back(std::sqrt(s));
    }
    return out;
}

TrainNorms train_norm_profile(const Mlp& net, const LabeledDataset& S) {
    if (S.size() == 0) throw InvalidInput("train_norm_profile: empty dataset");
    const std::size_t D = net.depth();
    const std::size_t m = S.size();

    TrainNorms tn;
    tn.D = D;
    tn.H = formula_width(net);
    tn.m = m;
    tn.alpha.assign(D, 0.0);
    tn.gamma.assign(D, std::numeric_limits<double>::infinity());
    tn.zeta = Matrix(D + 1, D + 1);
    tn.psi = Matrix(D + 1, D + 1);
    tn.gamma_class = std::numeric_limits<double>::infinity();
    tn.preact_min = Matrix(m, D, std::numeric_limits<double>::infinity());
    tn.preact_upper_min = Matrix(m, D, std::numeric_limits<double>::infinity());

    Vector sorted;
    for (std::size_t i = 0; i < m; ++i) {
        const ForwardTrace t = forward_trace(net, S.inputs[i]);
        for (std::size_t d = 0; d < D; ++d)
            tn.alpha[d] = std::max(tn.alpha[d], l2_norm(t.acts[d]));
        for (std::size_t d = 1; d < D; ++d) {
            const Vector& g = t.preacts[d - 1];
            sorted.resize(g.size());
            for (std::size_t h = 0; h < g.size(); ++h) sorted[h] = std::fabs(g[h]);
            std::sort(sorted.begin(), sorted.end());
            tn.preact_min(i, d) = sorted.front();
            tn.preact_upper_min(i, d) = sorted[sorted.size() / 2];
            tn.gamma[d] = std::min(tn.gamma[d], sorted.front());
        }
        tn.gamma_class = std::min(tn.gamma_class, margin(t.logits(), S.labels[i]));
        // one incremental sweep per starting layer covers every (from, to) pair
        for (std::size_t from = 1; from <= D; ++from) {
            Matrix J = identity(net.widths[from]);
            for (std::size_t to = from;; ++to) {
                tn.zeta(from, to) = std::max(tn.zeta(from, to), max_row_l2(J));
                tn.psi(from, to) = std::max(tn.psi(from, to), spectral_norm(J));
                if (to == D) break;
                const Vector& g = t.preacts[to - 1];
                for (std::size_t r = 0; r < J.rows; ++r)
                    if (g[r] <= 0.0)
                        for (std::size_t c = 0; c < J.cols; ++c) J(r, c) = 0.0;
                J = matmul(net.weights[to], J);
            }
        }
    }
    for (double& a : tn.alpha) a = std::max(a, 1.0);
    for (std::size_t from = 1; from <= D; ++from)
        for (std::size_t to = from; to <= D; ++to) {
            tn.zeta(from, to) = std::max(tn.zeta(from, to), 1.0);
            tn.psi(from, to) = std::max(tn.psi(from, to), 1.0);
        }
    tn.B = tn.alpha[0];
    tn.w_row.assign(D + 1, 0.0);
    tn.w_spec.assign(D + 1, 0.0);
    for (std::size_t d = 1; d <= D; ++d) {
        tn.w_row[d] = max_row_l2(net.weights[d - 1]);
        tn.w_spec[d] = spectral_norm(net.weights[d - 1]);
    }
    return tn;
}

BTerms b_terms(const TrainNorms& n, std::size_t H, std::size_t D) {
    BTerms b;
    const double rootH = std::sqrt(static_cast<double>(H));
    for (std::size_t d = 1; d < D; ++d) {
        double num = 0.0;
        for (std::size_t df = 1; df <= d; ++df) num += n.zeta(df, d) * n.alpha[df - 1];
        b.layer_l2 = std::max(b.layer_l2, num / n.alpha[d]);
        if (n.gamma[d] <= 0.0)
            throw DivisionByZero("B_preact: gamma*_" + std::to_string(d) + " = 0");
        b.preact = std::max(b.preact, num / (rootH * n.gamma[d]));
    }
    for (std::size_t d = 2; d <= D; ++d)
        for (std::size_t df = 1; df < d; ++df) {
            double row_num = n.zeta(df, d - 1);
            double spec_num = n.psi(df, d - 1);
            for (std::size_t dm = df + 1; dm <= d - 1; ++dm) {
                row_num += n.w_row[d] * n.psi(dm, d - 1) * n.zeta(df, dm - 1);
                spec_num += n.w_spec[d] * n.psi(dm, d - 1) * n.psi(df, dm - 1);
            }
            b.jac_row_l2 = std::max(b.jac_row_l2, row_num / n.zeta(df, d));
            b.jac_spec = std::max(b.jac_spec, spec_num / n.psi(df, d));
        }
    if (n.gamma_class <= 0.0) throw DivisionByZero("B_output: gamma_class <= 0");
    double out_num = 0.0;
    for (std::size_t d = 1; d <= D; ++d) out_num += n.zeta(d, D) * n.alpha[d - 1];
    b.output = out_num / (rootH * n.gamma_class);
    return b;
}

double sigma_star(const BTerms& b, std::size_t H, std::size_t D, std::size_t m) {
    const double rootH = std::sqrt(static_cast<double>(H));
    const double logf =
        std::sqrt(std::log(static_cast<double>(D) * static_cast<double>(H) *
                           std::sqrt(static_cast<double>(m))));
    const double mx = b.max_term();
    if (mx <= 0.0) throw DivisionByZero("sigma_star: max B term is 0");
    return 1.0 / (rootH * logf * mx);
}

TrainNorms preact_variant(const TrainNorms& norms, BoundVariant mode, double pct) {
    TrainNorms out = norms;
    if (mode == BoundVariant::Main || mode == BoundVariant::Cheap) return out;
    const std::size_t m = norms.m;
    for (std::size_t d = 1; d < norms.D; ++d) {
        if (mode == BoundVariant::PreactPct) {
            if (pct < 0.0 || pct >= 1.0) throw InvalidInput("preact_variant: pct in [0,1)");
            std::vector<double> col(m);
            for (std::size_t i = 0; i < m; ++i) col[i] = norms.preact_min(i, d);
            std::sort(col.begin(), col.end());
            const std::size_t drop = static_cast<std::size_t>(pct * static_cast<double>(m));
            out.gamma[d] = col[std::min(drop, m - 1)];
        } else {  // PreactMedian
            double g = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i)
                g = std::min(g, norms.preact_upper_min(i, d));
            out.gamma[d] = g;
        }
    }
    return out;
}

double b_jac_row_cheap(const TrainNorms& n) {
    const std::size_t D = n.D;
    double best = 0.0;
    for (std::size_t d = 2; d <= D; ++d)
        for (std::size_t df = 1; df < d; ++df) {
            double num = 0.0;
            for (std::size_t dm = df + 1; dm <= d; ++dm) {
                // dm == d indexes the empty-range Jacobian; its clamped row
                // norm is the identity's, i.e. 1
                const double lead = dm <= d - 1 ? n.zeta(dm, d - 1) : 1.0;
                num += lead * n.zeta(df, dm - 1);
            }
            best = std::max(best, num / n.zeta(df, d));
        }
    return best;
}

BoundReport thesis_bound_from_norms(const Mlp& net, const LabeledDataset& S,
                                    const TrainNorms& norms, const BoundOptions& opts) {
    if (!(opts.delta > 0.0 && opts.delta < 1.0))
        throw InvalidInput("thesis_bound: delta must be in (0,1)");
    BoundReport rep;
    rep.variant = to_string(opts.variant);

    TrainNorms n = preact_variant(norms, opts.variant, opts.pct);
    n.gamma_class = opts.gamma_class;

    const std::size_t D = n.D;
    const std::size_t H = n.H;
    const std::size_t m = n.m;

    std::size_t missed = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double g = margin(forward_logits(net, S.inputs[i]), S.labels[i]);
        if (g < opts.gamma_class) ++missed;
    }
    rep.train_term = static_cast<double>(missed) / static_cast<double>(S.size());
    rep.distance = distance_from_init(net);

    try {
        rep.b = b_terms(n, H, D);
        if (opts.variant == BoundVariant::Cheap) {
            rep.b.jac_row_l2 = b_jac_row_cheap(n);
            rep.b.jac_spec = 0.0;  // dropped from the max
        }
        rep.sigma_star = sigma_star(rep.b, H, D, m);
    } catch (const DivisionByZero&) {
        rep.infinite = true;
        rep.bound_value = std::numeric_limits<double>::infinity();
        rep.vacuous = true;
        return rep;
    }

    rep.kl_term = rep.distance * rep.distance / (2.0 * rep.sigma_star * rep.sigma_star);
    const double outer = opts.variant == BoundVariant::Cheap
                             ? static_cast<double>(D) * static_cast<double>(D)
                             : static_cast<double>(D);
    if (m < 2) throw InvalidInput("thesis_bound: m must be >= 2");
    const double radical = (2.0 * rep.kl_term + std::log(static_cast<double>(D) *
                                                         static_cast<double>(m) /
                                                         opts.delta)) /
                           static_cast<double>(m - 1);
    rep.bound_value = rep.train_term + outer * std::sqrt(radical);
    rep.vacuous = rep.bound_value > 1.0;
    return rep;
}

BoundReport thesis_bound(const Mlp& net, const LabeledDataset& S, const BoundOptions& opts) {
    return thesis_bound_from_norms(net, S, train_norm_profile(net, S), opts);
}

BoundReport thesis_bound_cheap(const Mlp& net, const LabeledDataset& S, BoundOptions opts) {
    opts.variant = BoundVariant::Cheap;
    return thesis_bound(net, S, opts);
}

namespace {

double spectral_product(const Mlp& net) {
    double p = 1.0;
    for (const Matrix& W : net.weights) p *= spectral_norm(W);
    return p;
}

}  // namespace

double neyshabur18_bound(const Mlp& net, double gamma, std::size_t m, double B,
                         std::size_t H, std::size_t D) {
    if (gamma <= 0.0) throw InvalidInput("neyshabur18_bound: gamma must be > 0");
    double dist = 0.0;
    for (std::size_t d = 0; d < net.depth(); ++d) {
        const double diff = distance_from_init_layers(net)[d];
        const double spec = spectral_norm(net.weights[d]);
        dist += diff * diff / (spec * spec);
    }
    return B * static_cast<double>(D) * std::sqrt(static_cast<double>(H)) /
           (gamma * std::sqrt(static_cast<double>(m))) * spectral_product(net) *
           std::sqrt(dist);
}

double bartlett17_bound(const Mlp& net, double gamma, std::size_t m, double B,
                        std::size_t H, std::size_t D) {
    if (gamma <= 0.0) throw InvalidInput("bartlett17_bound: gamma must be > 0");
    double dist = 0.0;
    for (std::size_t d = 0; d < net.depth(); ++d) {
        Matrix diff = net.weights[d];
        for (std::size_t k = 0; k < diff.data.size(); ++k)
            diff.data[k] -= net.init_snapshot[d].data[k];
        const double ratio = norm_2_1(diff) / spectral_norm(net.weights[d]);
        dist += std::pow(ratio, 2.0 / 3.0);
    }
    dist = std::pow(dist, 1.5) /
           (static_cast<double>(D) * std::sqrt(static_cast<double>(H)));
    return B * static_cast<double>(D) * std::sqrt(static_cast<double>(H)) /
           (gamma * std::sqrt(static_cast<double>(m))) * spectral_product(net) * dist;
}

double neyshabur_twolayer_bound(const Mlp& net, double gamma, std::size_t m,
                                std::size_t H) {
    if (gamma <= 0.0) throw InvalidInput("neyshabur_twolayer_bound: gamma must be > 0");
    if (net.depth() != 2) throw InvalidInput("neyshabur_twolayer_bound: needs depth 2");
    Matrix diff = net.weights[0];
    for (std::size_t k = 0; k < diff.data.size(); ++k)
        diff.data[k] -= net.init_snapshot[0].data[k];
    const double rootm = std::sqrt(static_cast<double>(m));
    return frobenius_norm(net.weights[1]) *
               (frobenius_norm(diff) + spectral_norm(net.init_snapshot[0])) /
               (gamma * rootm) +
           std::sqrt(static_cast<double>(H)) / rootm;
}

double derandomized_bound(double train_margin_rate, double mu_hat_s, double mu_d_bound,
                          double kl, std::size_t m, double delta) {
    if (m < 2) throw InvalidInput("derandomized_bound: m must be >= 2");
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidInput("derandomized_bound: delta in (0,1)");
    const double md = static_cast<double>(m);
    return train_margin_rate + mu_hat_s + mu_d_bound +
           2.0 * std::sqrt((2.0 * kl + std::log(2.0 * md / delta)) / (md - 1.0)) +
           2.0 / (std::sqrt(md) - 1.0);
}

double generic_framework_bound(double train_term, double kl, std::size_t m, double delta,
                               double R) {
    if (m < 2) throw InvalidInput("generic_framework_bound: m must be >= 2");
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidInput("generic_framework_bound: delta in (0,1)");
    if (R <= 0.0) throw InvalidInput("generic_framework_bound: R must be > 0");
    const double md = static_cast<double>(m);
    return train_term +
           R * std::sqrt((2.0 * kl + std::log(2.0 * md * R / delta)) / (md - 1.0));
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["b_layer_l2"] = b.layer_l2;
    j["b_preact"] = b.preact;
    j["b_jac_row_l2"] = b.jac_row_l2;
    j["b_jac_spec"] = b.jac_spec;
    j["b_output"] = b.output;
    j["sigma_star"] = sigma_star;
    j["kl_term"] = kl_term;
    j["train_term"] = train_term;
    j["distance_from_init"] = distance;
    j["bound_value"] = bound_value;
    j["infinite"] = infinite;
    j["vacuous"] = vacuous;
    j["constant_convention"] = constant_convention;
    j["variant"] = variant;
    return j.dump(2);
}

}  // namespace genlab
