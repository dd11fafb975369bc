#pragma once

// Constructors for the standard families of paths used throughout: rotation
// loops, unitary exponentials, diagonal unitary paths and exponentials of
// Hamiltonian matrices.  All are function-backed so they refine exactly.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "symporder/matrix_core.hpp"
#include "symporder/path_calculus.hpp"

namespace symporder::paths {

inline SampledPath identity(Eigen::Index n, std::size_t samples = kDefaultSamples) {
    const Matrix id = Matrix::Identity(2 * n, 2 * n);
    return SampledPath::from_function([id](double) { return id; }, samples);
}

// e^{t * angle * J}; a loop when angle is a multiple of 2 pi.
inline SampledPath rotation(double angle, Eigen::Index n = 1, std::size_t samples = kDefaultSamples) {
    const Matrix j = standard_J(n);
    const Matrix id = Matrix::Identity(2 * n, 2 * n);
    return SampledPath::from_function(
        [j, id, angle](double t) { return Matrix(std::cos(angle * t) * id + std::sin(angle * t) * j); }, samples);
}

// u(t) = e^{itA} for Hermitian A, realified.
inline SampledPath unitary_exp(const CMatrix &a, std::size_t samples = kDefaultSamples) {
    const HermitianSpectrum spectrum = hermitian_eig(a);
    return SampledPath::from_function(
        [spectrum](double t) {
            Eigen::VectorXcd ph(spectrum.eigenvalues.size());
            for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, t * spectrum.eigenvalues(i));
            return complex_to_real(spectrum.eigenvectors * ph.asDiagonal() * spectrum.eigenvectors.adjoint());
        },
        samples);
}

// diag(e^{i theta_1(t)}, ..., e^{i theta_n(t)}); each theta_j must vanish at 0.
inline SampledPath diagonal_unitary(std::vector<std::function<double(double)>> angles,
                                    std::size_t samples = kDefaultSamples) {
    if (angles.empty()) throw InvalidInput("diagonal_unitary: need at least one angle function");
    return SampledPath::from_function(
        [angles = std::move(angles)](double t) {
            const auto n = static_cast<Eigen::Index>(angles.size());
            Eigen::VectorXcd d(n);
            for (Eigen::Index i = 0; i < n; ++i) d(i) = std::polar(1.0, angles[static_cast<std::size_t>(i)](t));
            return complex_to_real(CMatrix(d.asDiagonal()));
        },
        samples);
}

// Constant-speed diagonal unitary path with total angles a_j.
inline SampledPath diagonal_rotation(const std::vector<double> &speeds, std::size_t samples = kDefaultSamples) {
    std::vector<std::function<double(double)>> angles;
    for (double a : speeds) angles.emplace_back([a](double t) { return a * t; });
    return diagonal_unitary(std::move(angles), samples);
}

// X(t) = exp(J (t S1 + t^2 S2)) for symmetric S1, S2.
inline SampledPath symplectic_exp(const Matrix &s1, const Matrix &s2, std::size_t samples = kDefaultSamples) {
    const Eigen::Index n = detail::require_even_square(s1, "symplectic_exp");
    if (s2.rows() != s1.rows() || s2.cols() != s1.cols()) throw InvalidInput("symplectic_exp: shape mismatch");
    const Matrix j = standard_J(n);
    const Matrix a = j * (0.5 * (s1 + s1.transpose()));
    const Matrix b = j * (0.5 * (s2 + s2.transpose()));
    return SampledPath::from_function([a, b](double t) { return matrix_exp(Matrix(t * a + t * t * b)); }, samples);
}

}  // namespace symporder::paths
