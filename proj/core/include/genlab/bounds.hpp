#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/network.hpp"

namespace genlab {

// Data-dependent norm profile over a training set (theorem clamps at 1 where
// stated). gamma holds the min |preactivation| per hidden layer d = 1..D-1
// and is NOT clamped; gamma_class is the min margin over S and may be <= 0.
struct TrainNorms {
    std::size_t D = 0, H = 0, m = 0;
    std::vector<double> alpha;  // d = 0..D-1; alpha[0] = max(max ||x||, 1) = B
    std::vector<double> gamma;  // d = 1..D-1 (index 0 unused)
    Matrix zeta;                // (d_from, d_to), 1 <= d_from <= d_to <= D
    Matrix psi;
    double gamma_class = 0.0;
    double B = 0.0;
    std::vector<double> w_row;   // ||W_d||_{2,inf}, index d = 1..D
    std::vector<double> w_spec;  // ||W_d||_2

    // raw per-datapoint, per-hidden-layer preactivation floors, kept so the
    // percentile / median gamma variants can be recomputed without rescanning
    Matrix preact_min;         // m x D (cols 1..D-1 used)
    Matrix preact_upper_min;   // min over the upper half of units per layer
};

struct BTerms {
    double layer_l2 = 0.0, preact = 0.0, jac_row_l2 = 0.0, jac_spec = 0.0, output = 0.0;
    double max_term() const;
};

enum class BoundVariant { Main, Cheap, PreactPct, PreactMedian };
const char* to_string(BoundVariant v);

struct BoundReport {
    BTerms b;
    double sigma_star = 0.0;
    double kl_term = 0.0;
    double train_term = 0.0;
    double distance = 0.0;
    double bound_value = 0.0;
    bool infinite = false;  // a gamma floor was exactly 0
    bool vacuous = false;   // bound_value > 1
    std::string constant_convention =
        "all O()/Otilde() constants set to 1; log factors as displayed";
    std::string variant = "main";
    std::string to_json() const;
};

double distance_from_init(const Mlp& net);
std::vector<double> distance_from_init_layers(const Mlp& net);

TrainNorms train_norm_profile(const Mlp& net, const LabeledDataset& S);

// The five displayed ratios. Throws DivisionByZero naming the failing term
// when a gamma floor or gamma_class is nonpositive.
BTerms b_terms(const TrainNorms& norms, std::size_t H, std::size_t D);
// Cheap-variant replacement for the row-l2 term (the spectral term is dropped
// from the max by the caller).
double b_jac_row_cheap(const TrainNorms& norms);

double sigma_star(const BTerms& b, std::size_t H, std::size_t D, std::size_t m);

// gamma_class budget: recompute the per-layer preactivation floors ignoring
// the lowest-|preact| fraction of datapoints (pct) or the lower half of units
// per layer per input (median).
TrainNorms preact_variant(const TrainNorms& norms, BoundVariant mode, double pct = 0.05);

struct BoundOptions {
    double delta = 0.05;
    double gamma_class = 10.0;
    BoundVariant variant = BoundVariant::Main;
    double pct = 0.05;
};

BoundReport thesis_bound(const Mlp& net, const LabeledDataset& S,
                         const BoundOptions& opts = {});
// Same, reusing a precomputed profile (the dataset is still needed for the
// margin-loss train term).
BoundReport thesis_bound_from_norms(const Mlp& net, const LabeledDataset& S,
                                    const TrainNorms& norms, const BoundOptions& opts);
BoundReport thesis_bound_cheap(const Mlp& net, const LabeledDataset& S,
                               BoundOptions opts = {});

// Baseline spectral bounds, with distances taken from the init snapshot.
double neyshabur18_bound(const Mlp& net, double gamma, std::size_t m, double B,
                         std::size_t H, std::size_t D);
double bartlett17_bound(const Mlp& net, double gamma, std::size_t m, double B,
                        std::size_t H, std::size_t D);
double neyshabur_twolayer_bound(const Mlp& net, double gamma, std::size_t m, std::size_t H);

// PAC-Bayes arithmetic shells.
double derandomized_bound(double train_margin_rate, double mu_hat_s, double mu_d_bound,
                          double kl, std::size_t m, double delta);
double generic_framework_bound(double train_term, double kl, std::size_t m, double delta,
                               double R);

}  // namespace genlab
