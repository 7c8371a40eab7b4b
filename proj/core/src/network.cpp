#include "genlab/network.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "genlab/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts unsupported");

namespace genlab {

namespace {

void check_widths(const std::vector<std::size_t>& widths) {
    if (widths.size() < 2) throw InvalidInput("Mlp: need at least one layer");
    for (std::size_t w : widths)
        if (w == 0) throw InvalidInput("Mlp: zero width");
}

}  // namespace

Mlp make_mlp(const std::vector<std::size_t>& widths) {
    check_widths(widths);
    Mlp net;
    net.widths = widths;
    for (std::size_t d = 1; d < widths.size(); ++d) {
        net.weights.emplace_back(widths[d], widths[d - 1]);
        net.init_snapshot.emplace_back(widths[d], widths[d - 1]);
    }
    return net;
}

Mlp make_mlp_xavier(const std::vector<std::size_t>& widths, Rng& rng, double c) {
    Mlp net = make_mlp(widths);
    for (std::size_t d = 0; d < net.depth(); ++d) {
        const double std_dev = c / std::sqrt(static_cast<double>(widths[d]));
        for (double& w : net.weights[d].data) w = rng.gaussian(std_dev);
        net.init_snapshot[d] = net.weights[d];
    }
    return net;
}

ForwardTrace forward_trace(const Mlp& net, const Vector& x) {
    if (x.size() != net.input_dim()) throw InvalidInput("forward_trace: input dim mismatch");
    ForwardTrace t;
    t.input = x;
    t.acts.push_back(x);
    Vector cur = x;
    const std::size_t D = net.depth();
    for (std::size_t d = 0; d < D; ++d) {
        Vector g = matvec(net.weights[d], cur);
        t.preacts.push_back(g);
        if (d + 1 < D) {
            for (double& v : g)
                if (v <= 0.0) v = 0.0;
            t.acts.push_back(g);
            cur = std::move(g);
        }
    }
    return t;
}

Vector forward_logits(const Mlp& net, const Vector& x) {
    if (x.size() != net.input_dim()) throw InvalidInput("forward_logits: input dim mismatch");
    Vector cur = x;
    const std::size_t D = net.depth();
    for (std::size_t d = 0; d < D; ++d) {
        cur = matvec(net.weights[d], cur);
        if (d + 1 < D)
            for (double& v : cur)
                if (v <= 0.0) v = 0.0;
    }
    return cur;
}

double margin(const Vector& logits, int y) {
    if (logits.size() == 1) {
        if (y != 1 && y != -1)
            throw InvalidInput("margin: single-logit labels must be +-1");
        return logits[0] * y;
    }
    if (y < 0 || static_cast<std::size_t>(y) >= logits.size())
        throw InvalidInput("margin: label out of range");
    double best_other = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < logits.size(); ++k)
        if (k != static_cast<std::size_t>(y)) best_other = std::max(best_other, logits[k]);
    return logits[static_cast<std::size_t>(y)] - best_other;
}

double loss_zero_one(double gamma) { return gamma < 0.0 ? 1.0 : 0.0; }

double loss_margin(double gamma, double gamma_star) {
    if (gamma_star < 0.0) throw InvalidInput("loss_margin: gamma_star must be >= 0");
    return gamma < gamma_star ? 1.0 : 0.0;
}

double loss_ramp(double gamma, double gamma_star) {
    if (gamma_star < 0.0) throw InvalidInput("loss_ramp: gamma_star must be >= 0");
    if (gamma_star == 0.0) return loss_zero_one(gamma);
    if (gamma < 0.0) return 1.0;
    if (gamma >= gamma_star) return 0.0;
    return 1.0 - gamma / gamma_star;
}

Matrix interlayer_jacobian(const ForwardTrace& trace, const Mlp& net,
                           std::size_t d_from, std::size_t d_to) {
    const std::size_t D = net.depth();
    if (d_from < 1 || d_to < d_from || d_to > D)
        throw InvalidInput("interlayer_jacobian: need 1 <= d_from <= d_to <= D");
    Matrix J = identity(net.widths[d_from]);
    for (std::size_t d = d_from + 1; d <= d_to; ++d) {
        // mask rows by the activation state of layer d-1, then left-multiply W_d
        const Vector& g = trace.preacts[d - 2];
        for (std::size_t i = 0; i < J.rows; ++i)
            if (g[i] <= 0.0)
                for (std::size_t j = 0; j < J.cols; ++j) J(i, j) = 0.0;
        J = matmul(net.weights[d - 1], J);
    }
    return J;
}

std::vector<Matrix> batch_preacts(const Mlp& net, const Matrix& X) {
    if (X.cols != net.input_dim()) throw InvalidInput("batch_preacts: input dim mismatch");
    std::vector<Matrix> G;
    const std::size_t D = net.depth();
    Matrix A = X;
    for (std::size_t d = 0; d < D; ++d) {
        Matrix Gd = matmul_bt(A, net.weights[d]);
        if (d + 1 < D) {
            A = Gd;
            for (double& v : A.data)
                if (v <= 0.0) v = 0.0;
        }
        G.push_back(std::move(Gd));
    }
    return G;
}

std::vector<Matrix> batch_grad(const Mlp& net, const Matrix& X, const std::vector<int>& y,
                               LossKind kind, double* mean_loss) {
    const std::size_t n = X.rows;
    const std::size_t D = net.depth();
    const std::size_t K = net.output_dim();
    if (y.size() != n) throw InvalidInput("batch_grad: label count mismatch");

    // forward, keeping activations per layer
    std::vector<Matrix> A(D);  // A[d] = activations feeding layer d+1 (A[0] = X)
    std::vector<Matrix> G(D);
    A[0] = X;
    for (std::size_t d = 0; d < D; ++d) {
        G[d] = matmul_bt(A[d], net.weights[d]);
        if (d + 1 < D) {
            A[d + 1] = G[d];
            for (double& v : A[d + 1].data)
                if (v <= 0.0) v = 0.0;
        }
    }

    // delta at the output layer: d(mean loss)/d logits
    Matrix delta(n, K);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    if (K == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] != 1 && y[i] != -1)
                throw InvalidInput("batch_grad: single-logit labels must be +-1");
            const double g = G[D - 1](i, 0);
            const double yy = static_cast<double>(y[i]);
            switch (kind) {
                case LossKind::CrossEntropy: {
                    const double z = yy * g;
                    // log(1 + exp(-z)), stably
                    loss += z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
                    delta(i, 0) = -yy / (1.0 + std::exp(z)) * inv_n;
                    break;
                }
                case LossKind::SquaredError:
                    loss += 0.5 * (g - yy) * (g - yy);
                    delta(i, 0) = (g - yy) * inv_n;
                    break;
                case LossKind::MarginAscent:
                    loss += -yy * g;
                    delta(i, 0) = -yy * inv_n;
                    break;
            }
        }
    } else {
        if (kind == LossKind::MarginAscent)
            throw InvalidInput("batch_grad: margin-ascent objective is single-logit only");
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] < 0 || static_cast<std::size_t>(y[i]) >= K)
                throw InvalidInput("batch_grad: label out of range");
            const std::size_t yi = static_cast<std::size_t>(y[i]);
            if (kind == LossKind::CrossEntropy) {
                double mx = G[D - 1](i, 0);
                for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, G[D - 1](i, k));
                double z = 0.0;
                for (std::size_t k = 0; k < K; ++k) z += std::exp(G[D - 1](i, k) - mx);
                loss += -(G[D - 1](i, yi) - mx - std::log(z));
                for (std::size_t k = 0; k < K; ++k) {
                    const double p = std::exp(G[D - 1](i, k) - mx) / z;
                    delta(i, k) = (p - (k == yi ? 1.0 : 0.0)) * inv_n;
                }
            } else {  // SquaredError vs one-hot
                for (std::size_t k = 0; k < K; ++k) {
                    const double r = G[D - 1](i, k) - (k == yi ? 1.0 : 0.0);
                    loss += 0.5 * r * r;
                    delta(i, k) = r * inv_n;
                }
            }
        }
    }
    if (mean_loss) *mean_loss = loss * inv_n;

    std::vector<Matrix> grads(D);
    for (std::size_t d = D; d-- > 0;) {
        grads[d] = matmul_at(delta, A[d]);
        if (d > 0) {
            Matrix prev = matmul(delta, net.weights[d]);
            for (std::size_t idx = 0; idx < prev.data.size(); ++idx)
                if (G[d - 1].data[idx] <= 0.0) prev.data[idx] = 0.0;
            delta = std::move(prev);
        }
    }
    return grads;
}

std::vector<Matrix> backprop_grad(const Mlp& net, const std::vector<Vector>& inputs,
                                  const std::vector<int>& labels, LossKind kind,
                                  double* mean_loss) {
    if (inputs.empty()) throw InvalidInput("backprop_grad: empty batch");
    Matrix X(inputs.size(), net.input_dim());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].size() != net.input_dim())
            throw InvalidInput("backprop_grad: input dim mismatch");
        std::memcpy(X.data.data() + i * X.cols, inputs[i].data(), X.cols * sizeof(double));
    }
    return batch_grad(net, X, labels, kind, mean_loss);
}

namespace {

constexpr char kMagic[4] = {'G', 'L', 'A', 'B'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in, std::size_t& offset) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw FormatError("checkpoint truncated", offset);
    offset += sizeof v;
    return v;
}

}  // namespace

void save_checkpoint(const Mlp& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("save_checkpoint: cannot open " + path);
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(net.depth()));
    for (std::size_t w : net.widths) write_u32(out, static_cast<std::uint32_t>(w));
    for (const Matrix& W : net.weights)
        out.write(reinterpret_cast<const char*>(W.data.data()), W.data.size() * sizeof(double));
    for (const Matrix& Z : net.init_snapshot)
        out.write(reinterpret_cast<const char*>(Z.data.data()), Z.data.size() * sizeof(double));
    if (!out) throw InvalidInput("save_checkpoint: write failed for " + path);
}

Mlp load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("checkpoint missing: " + path, 0);
    std::size_t offset = 0;
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("bad checkpoint magic", 0);
    offset = 4;
    const std::uint32_t version = read_u32(in, offset);
    if (version != kVersion) throw FormatError("unsupported checkpoint version", offset - 4);
    const std::uint32_t D = read_u32(in, offset);
    if (D == 0) throw FormatError("zero depth", offset - 4);
    std::vector<std::size_t> widths(D + 1);
    for (auto& w : widths) w = read_u32(in, offset);
    Mlp net = make_mlp(widths);
    auto read_mats = [&](std::vector<Matrix>& mats) {
        for (Matrix& M : mats) {
            in.read(reinterpret_cast<char*>(M.data.data()), M.data.size() * sizeof(double));
            if (!in) throw FormatError("checkpoint truncated", offset);
            offset += M.data.size() * sizeof(double);
        }
    };
    read_mats(net.weights);
    read_mats(net.init_snapshot);
    return net;
}

}  // namespace genlab
