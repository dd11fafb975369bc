#pragma once

// Seeded generators for random matrices and paths.  Every stream is keyed by
// (seed, index) so batch experiments are reproducible item by item and can be
// evaluated in any order.

#include <cstdint>
#include <random>
#include <vector>

#include "symporder/matrix_core.hpp"
#include "symporder/paths.hpp"

namespace symporder::rnd {

using Engine = std::mt19937_64;

inline Engine stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
    return Engine(seq);
}

inline double uniform(Engine &g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

inline int uniform_int(Engine &g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Matrix gaussian(Engine &g, Eigen::Index rows, Eigen::Index cols, double sigma = 1.0) {
    std::normal_distribution<double> nd(0.0, sigma);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(g);
    return m;
}

inline Matrix symmetric(Engine &g, Eigen::Index dim, double sigma = 1.0) {
    const Matrix a = gaussian(g, dim, dim, sigma);
    return 0.5 * (a + a.transpose());
}

inline CMatrix complex_gaussian(Engine &g, Eigen::Index n, double sigma = 1.0) {
    CMatrix c(n, n);
    c.real() = gaussian(g, n, n, sigma);
    c.imag() = gaussian(g, n, n, sigma);
    return c;
}

inline CMatrix hermitian(Engine &g, Eigen::Index n, double sigma = 1.0) {
    const CMatrix c = complex_gaussian(g, n, sigma);
    return 0.5 * (c + c.adjoint());
}

// Haar-distributed unitary via QR with phase correction.
inline CMatrix unitary(Engine &g, Eigen::Index n) {
    Eigen::HouseholderQR<CMatrix> qr(complex_gaussian(g, n));
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    }
    return q;
}

// exp(J S) for a random symmetric S of the given scale.
inline Matrix symplectic(Engine &g, Eigen::Index n, double sigma = 0.5) {
    return matrix_exp(Matrix(standard_J(n) * symmetric(g, 2 * n, sigma)));
}

// Generic path exp(J (t S1 + t^2 S2)) with a random overall scale.
inline SampledPath symplectic_path(Engine &g, Eigen::Index n, std::size_t samples = kDefaultSamples,
                                   double min_scale = 0.3, double max_scale = 1.5) {
    const double scale = uniform(g, min_scale, max_scale);
    const Matrix s1 = symmetric(g, 2 * n, scale);
    const Matrix s2 = symmetric(g, 2 * n, scale);
    return paths::symplectic_exp(s1, s2, samples);
}

// Unitary path exp(i (t A + t^2 B)), whose Maslov index is tr A + tr B.
inline SampledPath unitary_path(const CMatrix &a, const CMatrix &b, std::size_t samples = kDefaultSamples) {
    return SampledPath::from_function(
        [a, b](double t) { return complex_to_real(exp_i_hermitian(CMatrix(t * a + t * t * b))); }, samples);
}

}  // namespace symporder::rnd
