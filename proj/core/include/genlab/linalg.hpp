#pragma once

#include <cstddef>
#include <vector>

#include "genlab/rng.hpp"

namespace genlab {

using Vector = std::vector<double>;

// Dense row-major f64 matrix. All entries are expected finite; the norm
// routines check and throw InvalidInput otherwise.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    bool empty() const { return data.empty(); }
};

Matrix identity(std::size_t n);

struct SpectralResult {
    double value = 0.0;
    bool converged = false;
    std::size_t iters = 0;
};

// Top singular value via power iteration on M^T M, all-ones start vector.
SpectralResult spectral_norm_full(const Matrix& M, double tol = 1e-10,
                                  std::size_t max_iters = 10000);
double spectral_norm(const Matrix& M, double tol = 1e-10, std::size_t max_iters = 10000);

double frobenius_norm(const Matrix& M);

// The thesis uses ||W||_{2,1} without defining it; column-sum is our
// documented convention, row-sum toggleable.
enum class Norm21 { ColumnSums, RowSums };
double norm_2_1(const Matrix& M, Norm21 convention = Norm21::ColumnSums);

// ||M||_{2,inf}: max row l2 norm.
double max_row_l2(const Matrix& M);

Matrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, double sigma, Rng& rng);

// KL(N(mu1, s^2 I) || N(mu2, s^2 I)) = ||mu2 - mu1||^2 / (2 s^2)
double kl_spherical_gaussians(const Vector& mu1, const Vector& mu2, double sigma);

// --- vector / multiply plumbing ---
double dot(const Vector& a, const Vector& b);
double l2_norm(const Vector& v);

Vector matvec(const Matrix& A, const Vector& x);           // A x
Vector matvec_t(const Matrix& A, const Vector& x);          // A^T x
Matrix matmul(const Matrix& A, const Matrix& B);            // A B
Matrix matmul_bt(const Matrix& A, const Matrix& B);         // A B^T
Matrix matmul_at(const Matrix& A, const Matrix& B);         // A^T B

}  // namespace genlab
