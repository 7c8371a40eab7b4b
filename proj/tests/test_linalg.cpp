#include <doctest.h>

#include <cmath>

#include "genlab/errors.hpp"
#include "genlab/linalg.hpp"
#include "oracles.hpp"

using namespace genlab;

namespace {

Matrix diag3(double a, double b, double c) {
    Matrix M(3, 3);
    M(0, 0) = a;
    M(1, 1) = b;
    M(2, 2) = c;
    return M;
}

}  // namespace

TEST_CASE("spectral norm: identity and diagonal") {
    CHECK(spectral_norm(identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_norm(diag3(3, 1, 0.5)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spectral norm matches Jacobi SVD oracle on random matrices") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const std::size_t r = 2 + rng.below(7), c = 2 + rng.below(7);
        const Matrix M = sample_gaussian_matrix(r, c, 1.0, rng);
        const double ref = oracle::svd_top(M);
        CHECK(spectral_norm(M) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("spectral norm: non-finite entries rejected, convergence reported") {
    Matrix M(2, 2);
    M(0, 0) = std::nan("");
    CHECK_THROWS_AS(spectral_norm(M), InvalidInput);

    Rng rng(3);
    const Matrix R = sample_gaussian_matrix(6, 6, 1.0, rng);
    const SpectralResult res = spectral_norm_full(R, 1e-10, 10000);
    CHECK(res.converged);
    CHECK(res.iters <= 10000);
    // starved iteration budget: still returns the best estimate, flagged
    const SpectralResult starved = spectral_norm_full(R, 1e-30, 2);
    CHECK_FALSE(starved.converged);
    CHECK(starved.value > 0.0);
}

TEST_CASE("frobenius norm basics") {
    CHECK(frobenius_norm(identity(2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frobenius_norm(Matrix(3, 3)) == 0.0);
    Matrix M(1, 2);
    M(0, 0) = 3;
    M(0, 1) = 4;
    CHECK(frobenius_norm(M) == doctest::Approx(5.0));
}

TEST_CASE("norm_2_1 column convention and row toggle") {
    CHECK(norm_2_1(identity(2)) == doctest::Approx(2.0));
    CHECK(norm_2_1(Matrix(4, 4)) == 0.0);

    Rng rng(5);
    const Matrix M = sample_gaussian_matrix(4, 3, 1.0, rng);
    double col_sum = 0.0;
    for (std::size_t j = 0; j < M.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M.rows; ++i) s += M(i, j) * M(i, j);
        col_sum += std::sqrt(s);
    }
    CHECK(norm_2_1(M) == doctest::Approx(col_sum).epsilon(1e-15));

    double row_sum = 0.0;
    for (std::size_t i = 0; i < M.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols; ++j) s += M(i, j) * M(i, j);
        row_sum += std::sqrt(s);
    }
    CHECK(norm_2_1(M, Norm21::RowSums) == doctest::Approx(row_sum).epsilon(1e-15));
}

TEST_CASE("max row l2") {
    Matrix M(2, 2);
    M(0, 0) = 3;
    M(0, 1) = 4;
    M(1, 1) = 1;
    CHECK(max_row_l2(M) == doctest::Approx(5.0));
    CHECK(max_row_l2(identity(4)) == doctest::Approx(1.0));
}

TEST_CASE("gaussian matrix sampling: determinism and moments") {
    Rng a(42), b(42);
    const Matrix M1 = sample_gaussian_matrix(8, 8, 1.0, a);
    const Matrix M2 = sample_gaussian_matrix(8, 8, 1.0, b);
    CHECK(M1.data == M2.data);

    Rng z(1);
    const Matrix Z = sample_gaussian_matrix(5, 5, 0.0, z);
    for (double v : Z.data) CHECK(v == 0.0);
    CHECK_THROWS_AS(sample_gaussian_matrix(2, 2, -1.0, z), InvalidInput);

    Rng mc(99);
    const Matrix big = sample_gaussian_matrix(100, 100, 1.0, mc);
    double var = 0.0;
    for (double v : big.data) var += v * v;
    var /= static_cast<double>(big.data.size());
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("KL of spherical gaussians") {
    const Vector mu1 = {0, 0}, mu2 = {2, 0};
    CHECK(kl_spherical_gaussians(mu1, mu1, 1.0) == 0.0);
    CHECK(kl_spherical_gaussians(mu1, mu2, 1.0) == doctest::Approx(2.0));
    // symmetric in the means, 1/sigma^2 scaling
    CHECK(kl_spherical_gaussians(mu2, mu1, 1.0) ==
          doctest::Approx(kl_spherical_gaussians(mu1, mu2, 1.0)));
    CHECK(kl_spherical_gaussians(mu1, mu2, 2.0) ==
          doctest::Approx(kl_spherical_gaussians(mu1, mu2, 1.0) / 4.0));
    CHECK_THROWS_AS(kl_spherical_gaussians(mu1, mu2, 0.0), InvalidInput);
    CHECK_THROWS_AS(kl_spherical_gaussians(mu1, Vector{1.0}, 1.0), InvalidInput);
}

TEST_CASE("KL vs Monte-Carlo estimate of E_Q[log q/p] in 1-D") {
    // Q = N(mu2, s^2), P = N(mu1, s^2); E_Q[log q/p] = (mu2-mu1)^2 / (2 s^2)
    const double mu1 = 0.3, mu2 = 1.1, s = 0.7;
    Rng rng(123);
    double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double x = mu2 + rng.gaussian(s);
        acc += (-(x - mu2) * (x - mu2) + (x - mu1) * (x - mu1)) / (2 * s * s);
    }
    const double mc = acc / n;
    const double kl = kl_spherical_gaussians({mu1}, {mu2}, s);
    CHECK(kl == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("norm inequalities hold on random matrices") {
    Rng rng(7);
    for (int t = 0; t < 10; ++t) {
        const Matrix M = sample_gaussian_matrix(3 + rng.below(6), 3 + rng.below(6), 1.0, rng);
        CHECK(spectral_norm(M) <= frobenius_norm(M) + 1e-9);
        CHECK(max_row_l2(M) <= frobenius_norm(M) + 1e-12);
        // homogeneity
        Matrix M2 = M;
        for (double& v : M2.data) v *= -2.5;
        CHECK(spectral_norm(M2) == doctest::Approx(2.5 * spectral_norm(M)).epsilon(1e-8));
    }
}

TEST_CASE("rng contract: uniform range, split independence, determinism") {
    Rng a(17);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
    Rng b(17), c(17);
    for (int i = 0; i < 100; ++i) CHECK(b.next_u64() == c.next_u64());
    Rng child0 = b.split(0), child1 = b.split(1);
    CHECK(child0.next_u64() != child1.next_u64());
    CHECK(std::string(Rng::algorithm()).find("xoshiro") != std::string::npos);
}
