#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/training.hpp"

namespace genlab {

// The closed-form linear learner: h(x) = w1 . x1 + w2 . x2.
struct LinearLearnerWeights {
    Vector w1;  // K dims
    Vector w2;  // N dims
};

// w1 = 2m u, w2 = sum_i y_i x2^(i); one gradient-ascent pass at lr 1 from
// zero init on the y*h(x) objective lands exactly here.
LinearLearnerWeights linear_learn(const LabeledDataset& S);
double linear_eval(const LinearLearnerWeights& w, const Vector& x, std::size_t K);

// The exponential-activation learner evaluates
//   h(z) = sum_i y_i exp(||(z + x_i)/2||^2)
// in the signed log domain (the eta = (4 pi)^N prefactor is positive and
// never changes the sign, so it is kept only as log_eta).
struct ExpModel {
    const LabeledDataset* S = nullptr;
    std::size_t N = 0;
    double log_eta = 0.0;
};

ExpModel make_exp_model(const LabeledDataset& S);

struct SignedLog {
    int sign = 0;          // -1, 0, +1
    double log_mag = 0.0;  // -inf when sign == 0
};

SignedLog exp_eval(const ExpModel& model, const Vector& z);

enum class UcScenario { Linear, Exp, Hypersphere };

struct UcParams {
    std::size_t m = 100;
    std::size_t K = 2;       // linear: true dims
    std::size_t N = 0;       // linear / exp: noise dims
    double eps = 0.05;
    double delta = 0.05;
    std::size_t test_samples = 10000;
    // hypersphere scenario
    std::size_t dim = 100;
    std::size_t width = 4096;
    double r_in = 1.0;
    double r_out = 1.1;
    // Biasless ReLU nets are positively homogeneous and cannot separate
    // concentric spheres, so the trial runner appends this constant input
    // coordinate (a bias stand-in); 0 disables the augmentation.
    double augment = 1.0;
    TrainConfig train;
};

struct UcTrial {
    double train_error = 0.0;
    double test_error = 0.0;
    double sprime_error = 0.0;
    double min_train_margin = 0.0;
};

struct UcReport {
    UcScenario scenario;
    std::vector<UcTrial> trials;
    double mean_test_error = 0.0;
    double frac_sprime_full = 0.0;      // trials with S' completely misclassified
    double epsilon_lower_bound = 0.0;   // 1 - mean test error
    bool conditions_ok = true;
    bool warning = false;               // conditions failed but the run proceeded
    std::string to_json() const;
    void to_csv(const std::string& path) const;
};

UcReport ucfail_report(UcScenario scenario, const UcParams& params, std::size_t trials,
                       Rng& rng);

}  // namespace genlab
