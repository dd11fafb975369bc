#pragma once

// Dense small-matrix kernel for Sp(2n, R) and U(n).
//
// Real symplectic matrices act on R^{2n} = R^n (+) R^n with the standard
// structure J = [[0, -I], [I, 0]].  A complex n x n matrix A + iB is
// identified with the real block matrix [[A, -B], [B, A]]; under this
// identification U(n) is exactly the subgroup of Sp(2n, R) commuting with J.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "symporder/errors.hpp"

namespace symporder {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Default tolerance for structural predicates (symplectic, unitary, symmetric).
inline constexpr double kStructuralTol = 1e-9;

struct PolarFactors {
    Matrix unitary_part;   // orthogonal and symplectic
    Matrix positive_part;  // symmetric positive definite and symplectic
};

struct HermitianSpectrum {
    Vector eigenvalues;    // ascending
    CMatrix eigenvectors;  // unitary, columns
};

namespace detail {

inline double max_abs(const Eigen::Ref<const Matrix> &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double max_abs(const Eigen::Ref<const CMatrix> &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline void require_finite(const Eigen::Ref<const Matrix> &a, const char *what) {
    if (!a.allFinite()) throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
}

// Returns n for a valid 2n x 2n matrix.
inline Eigen::Index require_even_square(const Eigen::Ref<const Matrix> &a, const char *what) {
    if (a.rows() != a.cols()) throw InvalidInput(std::string(what) + ": matrix is not square");
    if (a.rows() < 2 || a.rows() % 2 != 0) {
        throw InvalidInput(std::string(what) + ": dimension " + std::to_string(a.rows()) + " is not even and positive");
    }
    require_finite(a, what);
    return a.rows() / 2;
}

}  // namespace detail

inline Matrix standard_J(Eigen::Index n) {
    if (n < 1) throw InvalidInput("standard_J: n must be positive");
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -Matrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    return j;
}

// max |A^T J A - J|
inline double symplectic_defect(const Eigen::Ref<const Matrix> &a) {
    const Eigen::Index n = detail::require_even_square(a, "symplectic_defect");
    const Matrix j = standard_J(n);
    return detail::max_abs(a.transpose() * j * a - j);
}

inline bool is_symplectic(const Eigen::Ref<const Matrix> &a, double tol = kStructuralTol) {
    return symplectic_defect(a) <= tol;
}

// Symplecticity with the tolerance scaled by |A|_F^2, the size of the
// rounding error in forming A^T J A.
inline bool is_symplectic_scaled(const Eigen::Ref<const Matrix> &a, double tol = kStructuralTol) {
    return symplectic_defect(a) <= tol * std::max(1.0, a.squaredNorm());
}

inline double unitary_defect(const Eigen::Ref<const Matrix> &a) {
    const Eigen::Index n = detail::require_even_square(a, "unitary_defect");
    const Matrix j = standard_J(n);
    return detail::max_abs(a * j - j * a);
}

inline bool commutes_with_J(const Eigen::Ref<const Matrix> &a, double tol = kStructuralTol) {
    return unitary_defect(a) <= tol * std::max(1.0, detail::max_abs(a));
}

inline bool is_symmetric(const Eigen::Ref<const Matrix> &a, double tol = kStructuralTol) {
    return a.rows() == a.cols() && detail::max_abs(a - a.transpose()) <= tol * std::max(1.0, detail::max_abs(a));
}

inline Matrix complex_to_real(const Eigen::Ref<const CMatrix> &u) {
    if (u.rows() != u.cols()) throw InvalidInput("complex_to_real: matrix is not square");
    const Eigen::Index n = u.rows();
    Matrix r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = u.real();
    r.topRightCorner(n, n) = -u.imag();
    r.bottomLeftCorner(n, n) = u.imag();
    r.bottomRightCorner(n, n) = u.real();
    return r;
}

// Complex-linear part of a real 2n x 2n matrix, (A - JAJ)/2 read as an n x n
// complex matrix.  Inverse of complex_to_real on matrices commuting with J.
inline CMatrix real_to_complex(const Eigen::Ref<const Matrix> &a) {
    const Eigen::Index n = detail::require_even_square(a, "real_to_complex");
    const Matrix re = 0.5 * (a.topLeftCorner(n, n) + a.bottomRightCorner(n, n));
    const Matrix im = 0.5 * (a.bottomLeftCorner(n, n) - a.topRightCorner(n, n));
    CMatrix c(n, n);
    c.real() = re;
    c.imag() = im;
    return c;
}

inline PolarFactors polar_decompose(const Eigen::Ref<const Matrix> &a, double tol = kStructuralTol) {
    detail::require_even_square(a, "polar_decompose");
    if (!is_symplectic_scaled(a, tol)) throw InvalidInput("polar_decompose: matrix is not symplectic");

    // The complex-linear part of A is U cosh(log P): same unitary factor,
    // singular values >= 1, so long products of hyperbolic elements stay safe.
    Eigen::JacobiSVD<CMatrix> svd(real_to_complex(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector &sigma = svd.singularValues();
    if (!sigma.allFinite() || sigma.minCoeff() <= 0.5) throw InvalidInput("polar_decompose: matrix is singular");

    PolarFactors out;
    out.unitary_part = complex_to_real(CMatrix(svd.matrixU() * svd.matrixV().adjoint()));
    const Matrix p = out.unitary_part.transpose() * a;
    out.positive_part = 0.5 * (p + p.transpose());
    return out;
}

inline HermitianSpectrum hermitian_eig(const Eigen::Ref<const CMatrix> &h, double tol = kStructuralTol) {
    if (h.rows() != h.cols()) throw InvalidInput("hermitian_eig: matrix is not square");
    if (!h.allFinite()) throw InvalidInput("hermitian_eig: matrix has non-finite entries");
    if (detail::max_abs(CMatrix(h - h.adjoint())) > tol * std::max(1.0, detail::max_abs(h))) {
        throw InvalidInput("hermitian_eig: matrix is not Hermitian");
    }
    const CMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success) throw NumericalError("hermitian_eig: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

// General complex exponential (Pade scaling and squaring).
inline CMatrix matrix_exp(const Eigen::Ref<const CMatrix> &a) {
    if (a.rows() != a.cols()) throw InvalidInput("matrix_exp: matrix is not square");
    return CMatrix(a).exp();
}

inline Matrix matrix_exp(const Eigen::Ref<const Matrix> &a) {
    if (a.rows() != a.cols()) throw InvalidInput("matrix_exp: matrix is not square");
    return Matrix(a).exp();
}

// e^{iH} for Hermitian H, evaluated spectrally: V diag(e^{i lambda}) V^H.
inline CMatrix exp_i_hermitian(const Eigen::Ref<const CMatrix> &h, double tol = kStructuralTol) {
    const HermitianSpectrum spectrum = hermitian_eig(h, tol);
    Eigen::VectorXcd phases(spectrum.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, spectrum.eigenvalues(i));
    return spectrum.eigenvectors * phases.asDiagonal() * spectrum.eigenvectors.adjoint();
}

}  // namespace symporder
