#pragma once

#include <cstddef>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/network.hpp"

namespace genlab {

// Per-property perturbation budgets under N(0, sigma^2) weight noise.
// Indexing: alpha[d] for d = 0..D (alpha[0] = 0), gamma[d] for d = 1..D,
// zeta(d_from, d_to) / psi(d_from, d_to) for 1 <= d_from <= d_to <= D with
// zero diagonals. Entries outside those ranges are unused zeros.
struct ToleranceSet {
    double sigma = 0.0;
    double delta_hat = 0.0;
    std::vector<double> alpha;  // layer-output l2 budgets
    std::vector<double> gamma;  // max-unit preactivation budgets
    Matrix zeta;                // Jacobian row-l2 budgets
    Matrix psi;                 // Jacobian spectral budgets

    static ToleranceSet zeros(std::size_t D);
};

// The closed-form budgets: outputs are written purely in terms of the trace's
// norms and the *input* tolerance set (the perturbations already granted to
// the preceding properties).
ToleranceSet analytic_tolerances(const Mlp& net, const ForwardTrace& trace, double sigma,
                                 double delta_hat, const ToleranceSet& input);

// Self-consistent chain: each budget is computed with the previously computed
// budgets as its inputs (layer/pair order), starting from alpha_0 = 0 and zero
// diagonals. analytic_tolerances(net, trace, s, d, chained) == chained.
ToleranceSet chained_tolerances(const Mlp& net, const ForwardTrace& trace, double sigma,
                                double delta_hat);

struct PerturbOptions {
    std::size_t trials = 200;
    bool frozen_activations = false;   // evaluate W+U with the clean ReLU pattern
    const ToleranceSet* compare = nullptr;  // count trials within these budgets
};

struct PerturbationStats {
    std::size_t trials = 0;
    std::vector<double> max_layer_dev;    // index d = 1..D
    std::vector<double> max_preact_dev;   // index d = 1..D
    Matrix max_jacrow_dev;                // (d_from, d_to)
    Matrix max_jacspec_dev;               // (d_from, d_to)
    std::vector<std::size_t> flips;       // activation flips per hidden layer d = 1..D-1
    std::size_t trials_with_flips = 0;
    std::size_t trials_all_within = 0;    // only meaningful when compare != nullptr
};

PerturbationStats empirical_perturbations(const Mlp& net, const Vector& x, double sigma,
                                          Rng& rng, const PerturbOptions& opts = {});

// Fraction of datapoints whose margin moves by more than Delta/2 with
// probability > nu under the weight noise (probability estimated by MC).
double noise_resilience_fraction(const Mlp& net, const LabeledDataset& data, double sigma,
                                 double Delta, double nu, std::size_t trials, Rng& rng);

}  // namespace genlab
