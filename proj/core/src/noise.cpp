#include "genlab/noise.hpp"

#include <cmath>

#include "genlab/errors.hpp"

namespace genlab {

namespace {

std::size_t formula_width(const Mlp& net) {
    // the H in the closed forms; nets are [N, H, .., H, K]
    std::size_t h = 1;
    for (std::size_t d = 1; d < net.widths.size(); ++d) h = std::max(h, net.widths[d]);
    return h;
}

struct JacCache {
    // norms of J^{d_from -> d_to} on the clean trace, 1 <= d_from <= d_to <= D
    Matrix frob, rowmax, spec;
};

JacCache jacobian_norms(const Mlp& net, const ForwardTrace& trace) {
    const std::size_t D = net.depth();
    JacCache c{Matrix(D + 1, D + 1), Matrix(D + 1, D + 1), Matrix(D + 1, D + 1)};
    for (std::size_t from = 1; from <= D; ++from)
        for (std::size_t to = from; to <= D; ++to) {
            const Matrix J = interlayer_jacobian(trace, net, from, to);
            c.frob(from, to) = frobenius_norm(J);
            c.rowmax(from, to) = max_row_l2(J);
            c.spec(from, to) = spectral_norm(J);
        }
    return c;
}

}  // namespace

ToleranceSet ToleranceSet::zeros(std::size_t D) {
    ToleranceSet t;
    t.alpha.assign(D + 1, 0.0);
    t.gamma.assign(D + 1, 0.0);
    t.zeta = Matrix(D + 1, D + 1);
    t.psi = Matrix(D + 1, D + 1);
    return t;
}

namespace {

// shared core; when `chain` is true the input set is ignored and each budget
// feeds on the ones already computed
ToleranceSet tolerances_impl(const Mlp& net, const ForwardTrace& trace, double sigma,
                             double delta_hat, const ToleranceSet* input, bool chain) {
    if (sigma < 0.0) throw InvalidInput("analytic_tolerances: sigma must be >= 0");
    if (!(delta_hat > 0.0 && delta_hat < 1.0))
        throw InvalidInput("analytic_tolerances: delta_hat must be in (0,1)");

    const std::size_t D = net.depth();
    const double H = static_cast<double>(formula_width(net));
    const double Dd = static_cast<double>(D);
    const double root2log = std::sqrt(2.0 * std::log(2.0 * Dd * H / delta_hat));
    const double root4log = std::sqrt(4.0 * std::log(Dd * H / delta_hat));

    const JacCache jc = jacobian_norms(net, trace);
    ToleranceSet out = ToleranceSet::zeros(D);
    out.sigma = sigma;
    out.delta_hat = delta_hat;

    auto in_alpha = [&](std::size_t d) { return chain ? out.alpha[d] : input->alpha[d]; };
    auto in_zeta = [&](std::size_t from, std::size_t to) {
        return chain ? out.zeta(from, to) : input->zeta(from, to);
    };
    auto in_psi = [&](std::size_t from, std::size_t to) {
        return chain ? out.psi(from, to) : input->psi(from, to);
    };

    for (std::size_t d = 1; d <= D; ++d) {
        // Jacobian budgets for pairs ending at d (they only consume budgets
        // of pairs ending strictly below d)
        for (std::size_t df = 1; df < d; ++df) {
            double zeta = jc.frob(df, d - 1) + in_zeta(df, d - 1) * std::sqrt(H);
            double psi = jc.spec(df, d - 1) + in_psi(df, d - 1);
            const double w_row = max_row_l2(net.weights[d - 1]);
            const double w_spec = spectral_norm(net.weights[d - 1]);
            for (std::size_t dm = df + 1; dm <= d - 1; ++dm) {
                zeta += w_row * jc.spec(dm, d - 1) *
                        (jc.frob(df, dm - 1) + in_zeta(df, dm - 1) * std::sqrt(H));
                psi += w_spec * jc.spec(dm, d - 1) *
                       (jc.spec(df, dm - 1) + in_psi(df, dm - 1));
            }
            out.zeta(df, d) = sigma * zeta * root4log;
            out.psi(df, d) = sigma * std::sqrt(H) * psi * root2log;
        }
        // layer-output and preactivation budgets (consume alpha of lower layers)
        double a = 0.0, g = 0.0;
        for (std::size_t df = 1; df <= d; ++df) {
            const double feed = l2_norm(trace.acts[df - 1]) + in_alpha(df - 1);
            a += jc.frob(df, d) * feed;
            g += jc.rowmax(df, d) * feed;
        }
        out.alpha[d] = sigma * a * root2log;
        out.gamma[d] = sigma * g * root2log;
    }
    return out;
}

}  // namespace

ToleranceSet analytic_tolerances(const Mlp& net, const ForwardTrace& trace, double sigma,
                                 double delta_hat, const ToleranceSet& input) {
    return tolerances_impl(net, trace, sigma, delta_hat, &input, false);
}

ToleranceSet chained_tolerances(const Mlp& net, const ForwardTrace& trace, double sigma,
                                double delta_hat) {
    return tolerances_impl(net, trace, sigma, delta_hat, nullptr, true);
}

namespace {

// forward under perturbed weights; if `frozen`, reuse the clean trace's
// activation pattern instead of the perturbed signs
ForwardTrace perturbed_trace(const Mlp& pert, const ForwardTrace& clean, const Vector& x,
                             bool frozen) {
    if (!frozen) return forward_trace(pert, x);
    ForwardTrace t;
    t.input = x;
    t.acts.push_back(x);
    Vector cur = x;
    const std::size_t D = pert.depth();
    for (std::size_t d = 0; d < D; ++d) {
        Vector g = matvec(pert.weights[d], cur);
        t.preacts.push_back(g);
        if (d + 1 < D) {
            for (std::size_t h = 0; h < g.size(); ++h)
                if (clean.preacts[d][h] <= 0.0) g[h] = 0.0;
            t.acts.push_back(g);
            cur = std::move(g);
        }
    }
    return t;
}

Vector row_norms(const Matrix& M) {
    Vector out(M.rows, 0.0);
    for (std::size_t i = 0; i < M.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols; ++j) s += M(i, j) * M(i, j);
        out[i] = std::sqrt(s);
    }
    return out;
}

}  // namespace

PerturbationStats empirical_perturbations(const Mlp& net, const Vector& x, double sigma,
                                          Rng& rng, const PerturbOptions& opts) {
    if (sigma < 0.0) throw InvalidInput("empirical_perturbations: sigma must be >= 0");
    const std::size_t D = net.depth();
    const ForwardTrace clean = forward_trace(net, x);

    // clean per-pair row norms and spectral norms
    std::vector<std::vector<Vector>> clean_rows(D + 1, std::vector<Vector>(D + 1));
    Matrix clean_spec(D + 1, D + 1);
    for (std::size_t from = 1; from <= D; ++from)
        for (std::size_t to = from; to <= D; ++to) {
            const Matrix J = interlayer_jacobian(clean, net, from, to);
            clean_rows[from][to] = row_norms(J);
            clean_spec(from, to) = spectral_norm(J);
        }

    PerturbationStats st;
    st.trials = opts.trials;
    st.max_layer_dev.assign(D + 1, 0.0);
    st.max_preact_dev.assign(D + 1, 0.0);
    st.max_jacrow_dev = Matrix(D + 1, D + 1);
    st.max_jacspec_dev = Matrix(D + 1, D + 1);
    st.flips.assign(D > 0 ? D - 1 : 0, 0);

    Mlp pert = net;
    for (std::size_t trial = 0; trial < opts.trials; ++trial) {
        for (std::size_t d = 0; d < D; ++d) {
            const Matrix& W = net.weights[d];
            Matrix& P = pert.weights[d];
            for (std::size_t k = 0; k < W.data.size(); ++k)
                P.data[k] = W.data[k] + rng.gaussian(sigma);
        }
        const ForwardTrace pt = perturbed_trace(pert, clean, x, opts.frozen_activations);

        bool within = true;
        bool flipped = false;
        for (std::size_t d = 1; d <= D; ++d) {
            // layer output: post-ReLU for hidden layers, logits at the top
            const Vector& cf = d < D ? clean.acts[d] : clean.preacts[D - 1];
            const Vector& pf = d < D ? pt.acts[d] : pt.preacts[D - 1];
            const double ldev = std::fabs(l2_norm(cf) - l2_norm(pf));
            st.max_layer_dev[d] = std::max(st.max_layer_dev[d], ldev);
            double pdev = 0.0;
            for (std::size_t h = 0; h < clean.preacts[d - 1].size(); ++h)
                pdev = std::max(pdev,
                                std::fabs(clean.preacts[d - 1][h] - pt.preacts[d - 1][h]));
            st.max_preact_dev[d] = std::max(st.max_preact_dev[d], pdev);
            if (opts.compare &&
                (ldev > opts.compare->alpha[d] || pdev > opts.compare->gamma[d]))
                within = false;
            if (d < D) {
                std::size_t f = 0;
                for (std::size_t h = 0; h < clean.preacts[d - 1].size(); ++h)
                    if ((clean.preacts[d - 1][h] > 0.0) != (pt.preacts[d - 1][h] > 0.0)) ++f;
                st.flips[d - 1] += f;
                if (f > 0) flipped = true;
            }
        }
        for (std::size_t from = 1; from <= D; ++from)
            for (std::size_t to = from + 1; to <= D; ++to) {
                const Matrix J = interlayer_jacobian(pt, pert, from, to);
                const Vector rn = row_norms(J);
                double rdev = 0.0;
                for (std::size_t h = 0; h < rn.size(); ++h)
                    rdev = std::max(rdev, std::fabs(rn[h] - clean_rows[from][to][h]));
                const double sdev = std::fabs(spectral_norm(J) - clean_spec(from, to));
                st.max_jacrow_dev(from, to) = std::max(st.max_jacrow_dev(from, to), rdev);
                st.max_jacspec_dev(from, to) = std::max(st.max_jacspec_dev(from, to), sdev);
                if (opts.compare && (rdev > opts.compare->zeta(from, to) ||
                                     sdev > opts.compare->psi(from, to)))
                    within = false;
            }
        if (flipped) ++st.trials_with_flips;
        if (within) ++st.trials_all_within;
    }
    return st;
}

double noise_resilience_fraction(const Mlp& net, const LabeledDataset& data, double sigma,
                                 double Delta, double nu, std::size_t trials, Rng& rng) {
    if (Delta <= 0.0) throw InvalidInput("noise_resilience_fraction: Delta must be > 0");
    if (sigma < 0.0) throw InvalidInput("noise_resilience_fraction: sigma must be >= 0");
    if (data.size() == 0) throw InvalidInput("noise_resilience_fraction: empty dataset");
    if (sigma == 0.0 || std::isinf(Delta)) return 0.0;

    const std::size_t m = data.size();
    std::vector<double> clean_margin(m);
    for (std::size_t i = 0; i < m; ++i)
        clean_margin[i] = margin(forward_logits(net, data.inputs[i]), data.labels[i]);

    // one perturbation draw serves every datapoint; this keeps the estimator
    // unbiased per point while batching the work
    std::vector<std::size_t> exceed(m, 0);
    Mlp pert = net;
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t d = 0; d < net.depth(); ++d)
            for (std::size_t k = 0; k < pert.weights[d].data.size(); ++k)
                pert.weights[d].data[k] = net.weights[d].data[k] + rng.gaussian(sigma);
        for (std::size_t i = 0; i < m; ++i) {
            const double g = margin(forward_logits(pert, data.inputs[i]), data.labels[i]);
            if (std::fabs(g - clean_margin[i]) > Delta / 2.0) ++exceed[i];
        }
    }
    std::size_t bad = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (static_cast<double>(exceed[i]) > nu * static_cast<double>(trials)) ++bad;
    return static_cast<double>(bad) / static_cast<double>(m);
}

}  // namespace genlab
