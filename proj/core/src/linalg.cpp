#include "genlab/linalg.hpp"

#include <cmath>

#include "genlab/errors.hpp"

namespace genlab {

namespace {

void check_finite(const Matrix& M, const char* who) {
    for (double v : M.data)
        if (!std::isfinite(v)) throw InvalidInput(std::string(who) + ": non-finite entry");
}

void check_nonempty(const Matrix& M, const char* who) {
    if (M.empty()) throw InvalidInput(std::string(who) + ": empty matrix");
}

}  // namespace

Matrix identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

SpectralResult spectral_norm_full(const Matrix& M, double tol, std::size_t max_iters) {
    check_nonempty(M, "spectral_norm");
    check_finite(M, "spectral_norm");
    if (tol <= 0.0) throw InvalidInput("spectral_norm: tol must be > 0");

    // power iteration on M^T M with a deterministic all-ones start
    const std::size_t n = M.cols;
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double sigma = 0.0;
    SpectralResult res;
    for (std::size_t it = 0; it < max_iters; ++it) {
        Vector mv = matvec(M, v);
        Vector w = matvec_t(M, mv);
        const double lambda = std::sqrt(dot(w, w));
        res.iters = it + 1;
        if (lambda == 0.0) {
            res.value = 0.0;
            res.converged = true;
            return res;
        }
        for (std::size_t i = 0; i < n; ++i) w[i] /= lambda;
        const double next = std::sqrt(lambda);
        if (std::fabs(next - sigma) <= tol * next) {
            res.value = next;
            res.converged = true;
            return res;
        }
        sigma = next;
        v = std::move(w);
    }
    res.value = sigma;
    res.converged = false;
    return res;
}

double spectral_norm(const Matrix& M, double tol, std::size_t max_iters) {
    return spectral_norm_full(M, tol, max_iters).value;
}

double frobenius_norm(const Matrix& M) {
    check_nonempty(M, "frobenius_norm");
    check_finite(M, "frobenius_norm");
    double s = 0.0;
    for (double v : M.data) s += v * v;
    return std::sqrt(s);
}

double norm_2_1(const Matrix& M, Norm21 convention) {
    check_nonempty(M, "norm_2_1");
    check_finite(M, "norm_2_1");
    double total = 0.0;
    if (convention == Norm21::ColumnSums) {
        for (std::size_t j = 0; j < M.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < M.rows; ++i) s += M(i, j) * M(i, j);
            total += std::sqrt(s);
        }
    } else {
        for (std::size_t i = 0; i < M.rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < M.cols; ++j) s += M(i, j) * M(i, j);
            total += std::sqrt(s);
        }
    }
    return total;
}

double max_row_l2(const Matrix& M) {
    check_nonempty(M, "max_row_l2");
    check_finite(M, "max_row_l2");
    double best = 0.0;
    for (std::size_t i = 0; i < M.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols; ++j) s += M(i, j) * M(i, j);
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

Matrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, double sigma, Rng& rng) {
    if (sigma < 0.0) throw InvalidInput("sample_gaussian_matrix: sigma must be >= 0");
    Matrix M(rows, cols);
    if (sigma == 0.0) return M;
    for (double& v : M.data) v = rng.gaussian(sigma);
    return M;
}

double kl_spherical_gaussians(const Vector& mu1, const Vector& mu2, double sigma) {
    if (sigma <= 0.0) throw InvalidInput("kl_spherical_gaussians: sigma must be > 0");
    if (mu1.size() != mu2.size())
        throw InvalidInput("kl_spherical_gaussians: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        const double d = mu2[i] - mu1[i];
        s += d * d;
    }
    return s / (2.0 * sigma * sigma);
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Vector matvec(const Matrix& A, const Vector& x) {
    if (A.cols != x.size()) throw InvalidInput("matvec: dimension mismatch");
    Vector y(A.rows, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* row = A.data.data() + i * A.cols;
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_t(const Matrix& A, const Vector& x) {
    if (A.rows != x.size()) throw InvalidInput("matvec_t: dimension mismatch");
    Vector y(A.cols, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* row = A.data.data() + i * A.cols;
        const double xi = x[i];
        for (std::size_t j = 0; j < A.cols; ++j) y[j] += row[j] * xi;
    }
    return y;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
    if (A.cols != B.rows) throw InvalidInput("matmul: dimension mismatch");
    Matrix C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* arow = A.data.data() + i * A.cols;
        double* crow = C.data.data() + i * C.cols;
        for (std::size_t k = 0; k < A.cols; ++k) {
            const double a = arow[k];
            if (a == 0.0) continue;
            const double* brow = B.data.data() + k * B.cols;
            for (std::size_t j = 0; j < B.cols; ++j) crow[j] += a * brow[j];
        }
    }
    return C;
}

Matrix matmul_bt(const Matrix& A, const Matrix& B) {
    if (A.cols != B.cols) throw InvalidInput("matmul_bt: dimension mismatch");
    Matrix C(A.rows, B.rows);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* arow = A.data.data() + i * A.cols;
        double* crow = C.data.data() + i * C.cols;
        for (std::size_t j = 0; j < B.rows; ++j) {
            const double* brow = B.data.data() + j * B.cols;
            double s = 0.0;
            for (std::size_t k = 0; k < A.cols; ++k) s += arow[k] * brow[k];
            crow[j] = s;
        }
    }
    return C;
}

Matrix matmul_at(const Matrix& A, const Matrix& B) {
    if (A.rows != B.rows) throw InvalidInput("matmul_at: dimension mismatch");
    Matrix C(A.cols, B.cols);
    for (std::size_t k = 0; k < A.rows; ++k) {
        const double* arow = A.data.data() + k * A.cols;
        const double* brow = B.data.data() + k * B.cols;
        for (std::size_t i = 0; i < A.cols; ++i) {
            const double a = arow[i];
            if (a == 0.0) continue;
            double* crow = C.data.data() + i * C.cols;
            for (std::size_t j = 0; j < B.cols; ++j) crow[j] += a * brow[j];
        }
    }
    return C;
}

}  // namespace genlab
