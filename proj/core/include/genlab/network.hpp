#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "genlab/linalg.hpp"

namespace genlab {

// Biasless fully-connected ReLU classifier:
//   f(x) = W_D relu(W_{D-1} ... relu(W_1 x))
// W_d has shape widths[d] x widths[d-1]; init_snapshot stores Z_d = W_d at init.
struct Mlp {
    std::vector<std::size_t> widths;     // [N, H, ..., H, K_out], length D+1
    std::vector<Matrix> weights;         // W_1 .. W_D
    std::vector<Matrix> init_snapshot;   // Z_1 .. Z_D

    std::size_t depth() const { return weights.size(); }
    std::size_t input_dim() const { return widths.front(); }
    std::size_t output_dim() const { return widths.back(); }
};

// Zero-initialized net of the given widths (Z = W = 0).
Mlp make_mlp(const std::vector<std::size_t>& widths);
// Xavier-style init: entries ~ N(0, (c/sqrt(fan_in))^2); snapshot taken.
Mlp make_mlp_xavier(const std::vector<std::size_t>& widths, Rng& rng, double c = 1.0);

struct ForwardTrace {
    Vector input;
    std::vector<Vector> preacts;  // g^1 .. g^D
    std::vector<Vector> acts;     // f^0 .. f^{D-1} (f^0 = input)
    const Vector& logits() const { return preacts.back(); }
};

ForwardTrace forward_trace(const Mlp& net, const Vector& x);
Vector forward_logits(const Mlp& net, const Vector& x);

// Multiclass: logits[y] - max_{k != y} logits[k]. Single logit: logit * y
// with y in {-1, +1}.
double margin(const Vector& logits, int y);

double loss_zero_one(double gamma);
double loss_margin(double gamma, double gamma_star);
double loss_ramp(double gamma, double gamma_star);

// J^{d_to/d_from} = d g^{d_to} / d g^{d_from}: product of weight matrices with
// columns masked by the trace's ReLU pattern (a preactivation of exactly 0
// counts as inactive). d_from == d_to gives the identity.
Matrix interlayer_jacobian(const ForwardTrace& trace, const Mlp& net,
                           std::size_t d_from, std::size_t d_to);

enum class LossKind { CrossEntropy, SquaredError, MarginAscent };

// Gradients of the mean loss over the batch, one matrix per layer.
// CrossEntropy: softmax CE (logistic in y*g for a single logit, y = +-1).
// SquaredError: 0.5 * ||logits - target||^2, target one-hot (or y itself for a
// single logit). MarginAscent: descent on -y*h(x), i.e. ascent on y*h(x)
// (single logit only).
std::vector<Matrix> backprop_grad(const Mlp& net, const std::vector<Vector>& inputs,
                                  const std::vector<int>& labels, LossKind kind,
                                  double* mean_loss = nullptr);

// --- batched kernels (row per example) used by the trainer ---
// Returns preactivation matrices G_1..G_D, each n x widths[d].
std::vector<Matrix> batch_preacts(const Mlp& net, const Matrix& X);
// Gradients of mean loss for the batch in X/y; also reports the mean loss.
std::vector<Matrix> batch_grad(const Mlp& net, const Matrix& X, const std::vector<int>& y,
                               LossKind kind, double* mean_loss = nullptr);

// Bit-exact checkpoint: magic "GLAB", version u32, D u32, widths u32[D+1],
// then each W then each Z as little-endian f64 row-major.
void save_checkpoint(const Mlp& net, const std::string& path);
Mlp load_checkpoint(const std::string& path);

}  // namespace genlab
