#pragma once

// Maslov quasimorphism on sampled symplectic paths.
//
// Convention: values are in RADIANS.  mu(X) is the total change of
// arg det U(t), where U(t) is the unitary polar factor of X(t) read as a
// complex n x n matrix.  The rotation loop e^{2 pi t J} in Sp(2) has
// mu = 2 pi.  The same quantity counted in turns is value / (2 pi).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "symporder/matrix_core.hpp"
#include "symporder/path_calculus.hpp"
#include "symporder/paths.hpp"
#include "symporder/random.hpp"

namespace symporder {

struct MaslovOptions {
    // Largest admissible argument increment between consecutive samples.
    // Increments near pi cannot be told apart from their negatives, so the
    // grid is refined well before that.
    double step_bound = kPi / 2;
    std::size_t max_samples = std::size_t{1} << 16;
    double tol = kStructuralTol;
};

struct MaslovResult {
    double value = 0.0;
    std::vector<double> per_step_increments;
    double max_step = 0.0;
    std::size_t samples_used = 0;

    [[nodiscard]] double turns() const { return value / kTwoPi; }
};

// det of the unitary polar factor, as a unit complex number.
inline Complex unitary_phase(const Matrix &a, double tol = kStructuralTol) {
    if (unitary_defect(a) <= 1e-13 && commutes_with_J(a, 1e-13)) {
        const Complex d = real_to_complex(a).determinant();
        return d / std::abs(d);
    }
    const PolarFactors pf = polar_decompose(a, tol);
    const Complex d = real_to_complex(pf.unitary_part).determinant();
    return d / std::abs(d);
}

namespace detail {

inline CMatrix unitary_factor(const Matrix &a, double tol) {
    if (unitary_defect(a) <= 1e-13 && commutes_with_J(a, 1e-13)) return real_to_complex(a);
    return real_to_complex(polar_decompose(a, tol).unitary_part);
}

// Each step is measured by the eigen-angles of U_{k+1} U_k^{-1}; the phase
// increment is their sum and the resolution test uses the largest of them,
// which catches rotations that cancel in the determinant.
inline MaslovResult maslov_on_grid(const SampledPath &x, double tol) {
    MaslovResult r;
    r.samples_used = x.size();
    r.per_step_increments.reserve(x.size() - 1);
    CMatrix prev = unitary_factor(x[0], tol);
    Eigen::ComplexEigenSolver<CMatrix> es;
    for (std::size_t k = 1; k < x.size(); ++k) {
        CMatrix cur = unitary_factor(x[k], tol);
        double inc = 0.0;
        if (cur.rows() == 1) {
            inc = std::arg(cur(0, 0) * std::conj(prev(0, 0)));
            r.max_step = std::max(r.max_step, std::abs(inc));
        } else {
            es.compute(cur * prev.adjoint(), false);
            for (Eigen::Index i = 0; i < cur.rows(); ++i) {
                const double a = std::arg(es.eigenvalues()(i));
                inc += a;
                r.max_step = std::max(r.max_step, std::abs(a));
            }
        }
        r.per_step_increments.push_back(inc);
        prev = std::move(cur);
    }
    r.value = std::accumulate(r.per_step_increments.begin(), r.per_step_increments.end(), 0.0);
    return r;
}

}  // namespace detail

// Largest eigen-angle of U_{k+1} U_k^{-1} per unit time over the grid.
inline double max_angular_rate(const SampledPath &x, double tol = kStructuralTol) {
    double rate = 0.0;
    CMatrix prev = detail::unitary_factor(x[0], tol);
    Eigen::ComplexEigenSolver<CMatrix> es;
    for (std::size_t k = 1; k < x.size(); ++k) {
        CMatrix cur = detail::unitary_factor(x[k], tol);
        es.compute(cur * prev.adjoint(), false);
        const double h = x.times()[k] - x.times()[k - 1];
        for (Eigen::Index i = 0; i < cur.rows(); ++i) rate = std::max(rate, std::abs(std::arg(es.eigenvalues()(i))) / h);
        prev = std::move(cur);
    }
    return rate;
}

inline MaslovResult maslov_index(const SampledPath &x, const MaslovOptions &opts = {}) {
    SampledPath current = x;
    std::optional<MaslovResult> coarse;
    for (;;) {
        MaslovResult r = detail::maslov_on_grid(current, opts.tol);
        const bool fits = 2 * current.size() - 1 <= opts.max_samples;
        if (r.max_step < opts.step_bound) {
            // Principal angles alias on coarse grids.  With an evaluator one
            // extra halving has to reproduce the value.
            if (!current.has_evaluator() || !fits) return r;
            if (coarse && std::abs(coarse->value - r.value) <= 1e-9 * (1.0 + std::abs(r.value))) return r;
            coarse = std::move(r);
            current = current.refined();
            continue;
        }
        coarse.reset();
        if (!fits) {
            throw ResolutionError("maslov_index: argument increments unresolved at " +
                                  std::to_string(current.size()) + " samples");
        }
        current = current.refined();
    }
}

// Trapezoid quadrature of tr h_u, where h_u is the complex generator of a
// unitary path.  Under realification tr H = 2 Re tr h_u.
inline double maslov_via_trace(const SampledPath &x, double tol = kStructuralTol) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!commutes_with_J(x[k], tol)) {
            throw InvalidInput("maslov_via_trace: sample " + std::to_string(k) + " is not unitary");
        }
    }
    const HamiltonianTrack track = extract_hamiltonian(x);
    double sum = 0.0;
    for (std::size_t k = 1; k < track.times.size(); ++k) {
        const double dt = track.times[k] - track.times[k - 1];
        sum += 0.25 * dt * (track.hams[k - 1].trace() + track.hams[k].trace());
    }
    return sum;
}

// mu(X^k)/k for k = 1..k_max; the last entry estimates the homogenization.
inline std::vector<double> homogenize(const SampledPath &x, int k_max, const MaslovOptions &opts = {}) {
    if (k_max < 1) throw InvalidInput("homogenize: k_max must be at least 1");
    std::vector<double> seq;
    seq.reserve(static_cast<std::size_t>(k_max));
    const double rate = x.has_evaluator() ? max_angular_rate(x, opts.tol) : 0.0;
    for (int k = 1; k <= k_max; ++k) {
        SampledPath xk = power(x, k);
        const auto needed = static_cast<std::size_t>(std::ceil(k * rate / (opts.step_bound / 2))) + 1;
        if (needed > xk.size() && needed <= opts.max_samples) xk = xk.resampled(uniform_times(needed));
        seq.push_back(maslov_index(xk, opts).value / k);
    }
    return seq;
}

enum class PairFamily { general, commuting_unitary, loops };

struct PathPair {
    SampledPath first;
    SampledPath second;
};

// The index-th random pair of the given family; deterministic in (seed, index).
inline PathPair sample_pair(PairFamily family, Eigen::Index n, std::uint64_t seed, std::uint64_t index,
                            std::size_t samples = kDefaultSamples) {
    rnd::Engine g = rnd::stream(seed, index);
    switch (family) {
        case PairFamily::general: {
            SampledPath a = rnd::symplectic_path(g, n, samples);
            SampledPath b = rnd::symplectic_path(g, n, samples);
            return {std::move(a), std::move(b)};
        }
        case PairFamily::commuting_unitary: {
            std::vector<double> sa, sb;
            for (Eigen::Index i = 0; i < n; ++i) {
                sa.push_back(rnd::uniform(g, -3 * kPi, 3 * kPi));
                sb.push_back(rnd::uniform(g, -3 * kPi, 3 * kPi));
            }
            return {paths::diagonal_rotation(sa, samples), paths::diagonal_rotation(sb, samples)};
        }
        case PairFamily::loops: {
            // W e^{itA} W^{-1} with e^{iA} = 1: a loop that is not unitary.
            auto loop = [&]() {
                const CMatrix v = rnd::unitary(g, n);
                Eigen::VectorXd ev(n);
                for (Eigen::Index i = 0; i < n; ++i) ev(i) = kTwoPi * rnd::uniform_int(g, -2, 2);
                const CMatrix a = v * ev.cast<Complex>().asDiagonal() * v.adjoint();
                return conjugate(rnd::symplectic(g, n, 0.4), paths::unitary_exp(a, samples));
            };
            SampledPath a = loop();
            SampledPath b = loop();
            return {std::move(a), std::move(b)};
        }
    }
    throw InvalidInput("sample_pair: unknown family");
}

inline double pair_defect(const SampledPath &x, const SampledPath &y, const MaslovOptions &opts = {}) {
    return std::abs(maslov_index(compose(x, y), opts).value - maslov_index(x, opts).value -
                    maslov_index(y, opts).value);
}

// max |mu(XY) - mu(X) - mu(Y)| over num_pairs random pairs in Sp(dim).
inline double quasimorphism_defect_sample(int num_pairs, Eigen::Index dim, std::uint64_t seed,
                                          PairFamily family = PairFamily::general,
                                          const MaslovOptions &opts = {}) {
    if (num_pairs < 1) throw InvalidInput("quasimorphism_defect_sample: num_pairs must be at least 1");
    if (dim < 2 || dim % 2 != 0) throw InvalidInput("quasimorphism_defect_sample: dimension must be even");
    double worst = 0.0;
    for (int i = 0; i < num_pairs; ++i) {
        const PathPair p = sample_pair(family, dim / 2, seed, static_cast<std::uint64_t>(i));
        worst = std::max(worst, pair_defect(p.first, p.second, opts));
    }
    return worst;
}

struct RedistributedSpectrum {
    Vector eigenvalues;  // ascending order of the reduced values, then shifted
    CMatrix basis;       // unitary, columns match eigenvalues
    long long shifts = 0;  // number k of 2 pi's distributed

    [[nodiscard]] CMatrix reassembled() const {
        return basis * eigenvalues.cast<Complex>().asDiagonal() * basis.adjoint();
    }
};

// Positive semidefinite logarithm of e^{iA} with prescribed trace.  Eigenvalues
// are reduced into (0, 2 pi]; the k = (target - sum)/2 pi missing 2 pi's go
// l = k / n times to every eigenvalue and once more to the m = k mod n
// smallest ones.
inline RedistributedSpectrum redistribute_eigenvalues(const CMatrix &a, double target_mu,
                                                      double tol = kStructuralTol) {
    const Eigen::Index n = a.rows();
    if (n < 1 || a.cols() != n) throw InvalidInput("redistribute_eigenvalues: matrix is not square");
    if (target_mu < kTwoPi * static_cast<double>(n) - tol) {
        throw DomainError("redistribute_eigenvalues: target below 2 pi n");
    }
    const HermitianSpectrum spec = hermitian_eig(a, tol);

    std::vector<double> reduced(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = spec.eigenvalues(i) - kTwoPi * std::floor(spec.eigenvalues(i) / kTwoPi);
        if (r <= 0.0) r += kTwoPi;
        if (r > kTwoPi) r = kTwoPi;
        reduced[static_cast<std::size_t>(i)] = r;
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
        return reduced[static_cast<std::size_t>(p)] < reduced[static_cast<std::size_t>(q)];
    });

    const double reduced_sum = std::accumulate(reduced.begin(), reduced.end(), 0.0);
    const double k_real = (target_mu - reduced_sum) / kTwoPi;
    const double k_round = std::round(k_real);
    if (std::abs(k_real - k_round) > 1e-6) {
        throw DomainError("redistribute_eigenvalues: target differs from tr A by a non-multiple of 2 pi");
    }
    const auto k = static_cast<long long>(k_round);
    if (k < 0) throw DomainError("redistribute_eigenvalues: target below the reduced trace");

    const long long l = k / n;
    const long long m = k % n;
    RedistributedSpectrum out;
    out.shifts = k;
    out.eigenvalues.resize(n);
    out.basis.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = order[static_cast<std::size_t>(i)];
        double lam = reduced[static_cast<std::size_t>(src)] + kTwoPi * static_cast<double>(l);
        if (i < m) lam += kTwoPi;
        out.eigenvalues(i) = lam;
        out.basis.col(i) = spec.eigenvectors.col(src);
    }
    return out;
}

struct SymplecticEigenbasis {
    Matrix basis;                // orthogonal symplectic U0 with U0^T P U0 = diag(lambda, 1/lambda)
    std::vector<double> lambdas;  // descending
};

// Unitary diagonalization of a symmetric positive definite symplectic P.
// Eigenvectors v_i are chosen so that {v_i, J v_i} is orthonormal; then
// P v_i = lambda_i v_i and P J v_i = J v_i / lambda_i.
inline SymplecticEigenbasis symplectic_eigenbasis(const Matrix &p, double tol = kStructuralTol) {
    const Eigen::Index n = detail::require_even_square(p, "symplectic_eigenbasis");
    if (!is_symmetric(p, tol)) throw InvalidInput("positive_path_to: matrix is not symmetric");
    if (!is_symplectic_scaled(p, tol)) throw InvalidInput("positive_path_to: matrix is not symplectic");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.transpose()));
    if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0) {
        throw InvalidInput("positive_path_to: matrix is not positive definite");
    }
    const Matrix j = standard_J(n);
    const Matrix &vecs = es.eigenvectors();

    Matrix chosen(2 * n, 0);
    auto residual = [&](const Vector &v) {
        Vector r = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < chosen.cols(); ++c) {
                const Vector a = chosen.col(c);
                const Vector b = j * a;
                r -= a.dot(r) * a;
                r -= b.dot(r) * b;
            }
        }
        return r;
    };
    std::vector<bool> used(static_cast<std::size_t>(2 * n), false);
    while (chosen.cols() < n) {
        Eigen::Index pick = -1;
        double best = 0.0;
        for (Eigen::Index c = 2 * n - 1; c >= 0; --c) {  // descending eigenvalue
            if (used[static_cast<std::size_t>(c)]) continue;
            const double norm = residual(vecs.col(c)).norm();
            if (norm >= 0.5) {
                pick = c;
                break;
            }
            if (norm > best) {
                best = norm;
                pick = c;
            }
        }
        if (pick < 0 || residual(vecs.col(pick)).norm() < 1e-6) {
            throw NumericalError("symplectic_eigenbasis: could not complete a Lagrangian eigenbasis");
        }
        used[static_cast<std::size_t>(pick)] = true;
        const Vector r = residual(vecs.col(pick));
        chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
        chosen.col(chosen.cols() - 1) = r / r.norm();
    }

    SymplecticEigenbasis out;
    out.basis.resize(2 * n, 2 * n);
    out.basis.leftCols(n) = chosen;
    out.basis.rightCols(n) = j * chosen;
    for (Eigen::Index i = 0; i < n; ++i) out.lambdas.push_back(chosen.col(i).dot(p * chosen.col(i)));
    return out;
}

// The n = 1 positive path from 1 to diag(lambda, 1/lambda):
// X(t) = R(2 pi t) diag(f, 1/f) R(2 pi t),  f(t) = tan(pi/4 + a t),
// a = arctan(lambda) - pi/4.
inline Matrix positive_path_2x2(double lambda, double t) {
    const double a = std::atan(lambda) - kPi / 4;
    const double f = std::tan(kPi / 4 + a * t);
    const double c = std::cos(kTwoPi * t);
    const double s = std::sin(kTwoPi * t);
    Matrix r(2, 2);
    r << c, -s, s, c;
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = f;
    d(1, 1) = 1.0 / f;
    return r * d * r;
}

// Positive path from the identity to P with mu <= 4 pi n.
inline SampledPath positive_path_to(const Matrix &p, std::size_t samples = kDefaultSamples,
                                    double tol = kStructuralTol) {
    const SymplecticEigenbasis eb = symplectic_eigenbasis(p, tol);
    const Eigen::Index n = p.rows() / 2;
    const Matrix u0 = eb.basis;
    const std::vector<double> lambdas = eb.lambdas;
    return SampledPath::from_function(
        [u0, lambdas, n](double t) {
            Matrix acc = Matrix::Identity(2 * n, 2 * n);
            for (Eigen::Index i = 0; i < n; ++i) {
                acc = acc * embed_block_matrix(positive_path_2x2(lambdas[static_cast<std::size_t>(i)], t), i + 1, n);
            }
            return Matrix(u0 * acc * u0.transpose());
        },
        samples, tol);
}

// Sufficient test for positivity: mu(Y) >= 6 pi n + C.  false means the
// criterion is inconclusive.
inline bool positivity_criterion(const SampledPath &y, double defect_bound, const MaslovOptions &opts = {}) {
    if (defect_bound < 0) throw InvalidInput("positivity_criterion: defect bound must be nonnegative");
    const double threshold = 3.0 * kTwoPi * static_cast<double>(y.half_dim()) + defect_bound;
    return maslov_index(y, opts).value >= threshold;
}

}  // namespace symporder
