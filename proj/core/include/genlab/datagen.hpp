#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "genlab/linalg.hpp"

namespace genlab {

// Metadata carried by the linear / exponential scenario generators: the
// planted direction u and the split of the input into K "true" dims and N
// "noise" dims. Downstream learners read u from here, never re-estimate it.
struct ScenarioMeta {
    Vector u;
    std::size_t K = 0;
    std::size_t N = 0;
};

struct LabeledDataset {
    std::vector<Vector> inputs;
    std::vector<int> labels;
    std::optional<ScenarioMeta> meta;

    std::size_t size() const { return inputs.size(); }
    std::size_t dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
};

// ----- linear setup -----
// x = (x1, x2) in R^{K+N}; y uniform +-1; x1 = 2*y*u with ||u|| = 1/sqrt(m);
// x2 ~ N(0, 32/N * I). Constants from the corresponding theorem.
struct LinearSetupParams {
    std::size_t m = 0;
    std::size_t K = 2;
    std::size_t N = 0;
    static constexpr double c1 = 1.0 / 2048.0;
    // c2 = sqrt(15/16), c3 = sqrt(17/16), c4 = sqrt(2)
    static double c2();
    static double c3();
    static double c4();
};

LabeledDataset gen_linear(const LinearSetupParams& params, Rng& rng);
// S' = {((x1, -x2), y)}: noise halves negated, labels kept.
LabeledDataset linear_bad_dataset(const LabeledDataset& S);
// True iff N clears all three sample-size inequalities. Requires delta < 1/4.
bool linear_conditions(const LinearSetupParams& params, double eps, double delta);

// ----- hypersphere setup -----
// Uniform on two origin-centered spheres; label 0 inner, 1 outer, balanced.
LabeledDataset gen_hypersphere(std::size_t m, std::size_t dim, double r_in, double r_out,
                               Rng& rng);
// Project each point onto the other sphere and flip its label.
LabeledDataset hypersphere_bad_dataset(const LabeledDataset& S, double r_in = 1.0,
                                       double r_out = 1.1);

// ----- exponential-activation setup -----
// x = (x1, x2) in R^{2N}; x1 = y*u with ||u|| = sqrt(N)/2; x2 ~ N(0, I).
LabeledDataset gen_exp(std::size_t m, std::size_t N, Rng& rng);
// S' = {((-x1, x2), -y)}: everything negated except the noise vector.
LabeledDataset exp_bad_dataset(const LabeledDataset& S);
bool exp_conditions(std::size_t m, std::size_t N, double eps, double delta);

// Reassign a uniformly chosen floor(fraction*m) subset to uniform labels in
// [0, K) (possibly equal to the original).
LabeledDataset corrupt_labels(const LabeledDataset& S, double fraction, std::size_t K,
                              Rng& rng);

// Big-endian IDX (magic 0x803 images / 0x801 labels); pixels scaled to [0,1].
LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path);

// CSV with header "x0,...,xd,label", 17 significant digits.
void save_csv(const LabeledDataset& S, const std::string& path);
LabeledDataset load_csv(const std::string& path);

// Artifact plumbing, not a thesis distribution: K Gaussian blobs with centers
// of norm center_scale on a seeded random direction; used as the desk-scale
// stand-in when no IDX files are available. Centers depend only on
// (center_seed, dim, K), so train and test splits drawn with independent rngs
// share the same distribution.
LabeledDataset gen_gaussian_mixture(std::size_t m, std::size_t dim, std::size_t K,
                                    double center_scale, double noise_sigma, Rng& rng,
                                    std::uint64_t center_seed = 0x6d785eedULL);

}  // namespace genlab
