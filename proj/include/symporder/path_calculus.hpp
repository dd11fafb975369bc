#pragma once

// Time-sampled paths in Sp(2n, R) starting at the identity.  A path stands in
// for the element of the universal cover it represents.  Its generating
// Hamiltonian H(t) is the symmetric matrix with  dX/dt X^{-1} = J H.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "symporder/matrix_core.hpp"

namespace symporder {

// Default number of uniform samples for function-backed paths.
inline constexpr std::size_t kDefaultSamples = 256;

inline std::vector<double> uniform_times(std::size_t samples) {
    if (samples < 3) throw InvalidInput("uniform_times: need at least 3 samples");
    std::vector<double> t(samples);
    const double denom = static_cast<double>(samples - 1);
    for (std::size_t k = 0; k < samples; ++k) t[k] = static_cast<double>(k) / denom;
    t.back() = 1.0;
    return t;
}

class SampledPath {
  public:
    using Evaluator = std::function<Matrix(double)>;

    // Validates the sample list: times strictly increasing on [0, 1], first
    // sample the identity, every sample symplectic.
    static SampledPath from_samples(std::vector<double> times, std::vector<Matrix> matrices,
                                    double tol = kStructuralTol) {
        SampledPath p;
        p.times_ = std::move(times);
        p.matrices_ = std::move(matrices);
        p.validate(tol);
        return p;
    }

    // Samples an exact evaluator on a uniform grid and keeps it for later
    // refinement.
    static SampledPath from_function(Evaluator fn, std::size_t samples = kDefaultSamples,
                                     double tol = kStructuralTol) {
        return from_function_on(std::move(fn), uniform_times(samples), tol);
    }

    static SampledPath from_function_on(Evaluator fn, std::vector<double> times, double tol = kStructuralTol) {
        if (!fn) throw InvalidInput("SampledPath: empty evaluator");
        SampledPath p;
        p.times_ = std::move(times);
        p.matrices_.reserve(p.times_.size());
        for (double t : p.times_) p.matrices_.push_back(fn(t));
        p.evaluator_ = std::make_shared<const Evaluator>(std::move(fn));
        p.validate(tol);
        return p;
    }

    [[nodiscard]] Eigen::Index dim() const { return matrices_.front().rows(); }
    [[nodiscard]] Eigen::Index half_dim() const { return dim() / 2; }
    [[nodiscard]] std::size_t size() const { return times_.size(); }
    [[nodiscard]] const std::vector<double> &times() const { return times_; }
    [[nodiscard]] const std::vector<Matrix> &matrices() const { return matrices_; }
    [[nodiscard]] const Matrix &operator[](std::size_t k) const { return matrices_[k]; }
    [[nodiscard]] const Matrix &endpoint() const { return matrices_.back(); }
    [[nodiscard]] bool has_evaluator() const { return static_cast<bool>(evaluator_); }
    [[nodiscard]] const Evaluator *evaluator() const { return evaluator_.get(); }

    [[nodiscard]] double max_step() const {
        double h = 0.0;
        for (std::size_t k = 1; k < times_.size(); ++k) h = std::max(h, times_[k] - times_[k - 1]);
        return h;
    }

    // Same path with a midpoint inserted in every interval.
    [[nodiscard]] SampledPath refined() const;

    // Same path re-sampled on another grid of [0, 1].  Exact when an evaluator
    // is attached, otherwise X(t) = exp((t - t_k) J H(t_k)) X(t_k) from the
    // nearest sample at or below t.
    [[nodiscard]] SampledPath resampled(const std::vector<double> &times) const;

  private:
    SampledPath() = default;

    friend SampledPath make_unchecked_path(std::vector<double>, std::vector<Matrix>,
                                           std::shared_ptr<const SampledPath::Evaluator>);

    void validate(double tol) const {
        if (times_.size() != matrices_.size()) throw InvalidInput("SampledPath: times and matrices differ in length");
        if (times_.size() < 3) throw InvalidInput("SampledPath: need at least 3 samples");
        if (std::abs(times_.front()) > 1e-12 || std::abs(times_.back() - 1.0) > 1e-12) {
            throw InvalidInput("SampledPath: times must start at 0 and end at 1");
        }
        for (std::size_t k = 1; k < times_.size(); ++k) {
            if (!(times_[k] > times_[k - 1])) throw InvalidInput("SampledPath: times are not strictly increasing");
        }
        const Eigen::Index d = matrices_.front().rows();
        for (std::size_t k = 0; k < matrices_.size(); ++k) {
            const Matrix &m = matrices_[k];
            if (m.rows() != d || m.cols() != d) {
                throw InvalidInput("SampledPath: sample " + std::to_string(k) + " has inconsistent dimension");
            }
            detail::require_even_square(m, "SampledPath");
            if (!is_symplectic_scaled(m, tol)) {
                throw InvalidInput("SampledPath: sample " + std::to_string(k) + " is not symplectic");
            }
        }
        if (detail::max_abs(matrices_.front() - Matrix::Identity(d, d)) > tol) {
            throw InvalidInput("SampledPath: path does not start at the identity");
        }
    }

    std::vector<double> times_;
    std::vector<Matrix> matrices_;
    std::shared_ptr<const Evaluator> evaluator_;
};

// Internal constructor for results of group operations on already valid paths.
inline SampledPath make_unchecked_path(std::vector<double> times, std::vector<Matrix> matrices,
                                       std::shared_ptr<const SampledPath::Evaluator> evaluator) {
    SampledPath p;
    p.times_ = std::move(times);
    p.matrices_ = std::move(matrices);
    p.evaluator_ = std::move(evaluator);
    return p;
}

struct HamiltonianTrack {
    std::vector<double> times;
    std::vector<Matrix> hams;
    double max_asymmetry = 0.0;  // largest |raw - raw^T|/2 before symmetrization
};

namespace detail {

inline Matrix checked_inverse(const Matrix &m, std::ptrdiff_t index) {
    Eigen::PartialPivLU<Matrix> lu(m);
    const double d = std::abs(lu.determinant());
    if (!(d > 1e-300) || !std::isfinite(d)) throw NumericalError("singular path sample", index);
    Matrix inv = lu.inverse();
    if (!inv.allFinite()) throw NumericalError("singular path sample", index);
    return inv;
}

// Second-order finite-difference weights for the derivative at sample k on a
// possibly non-uniform grid; one-sided stencils at the ends.
struct Stencil {
    std::size_t i0;
    double w0, w1, w2;
};

inline Stencil derivative_stencil(const std::vector<double> &t, std::size_t k) {
    const std::size_t n = t.size();
    if (k == 0) {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        return {0, -(2 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))};
    }
    if (k == n - 1) {
        const double h1 = t[n - 1] - t[n - 2];
        const double h2 = t[n - 2] - t[n - 3];
        return {n - 3, h1 / (h2 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2 * h1 + h2) / (h1 * (h1 + h2))};
    }
    const double h1 = t[k] - t[k - 1];
    const double h2 = t[k + 1] - t[k];
    return {k - 1, -h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

inline std::vector<double> merge_times(const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    std::vector<double> dedup;
    dedup.reserve(out.size());
    for (double t : out) {
        if (dedup.empty() || t - dedup.back() > 1e-14) dedup.push_back(t);
    }
    dedup.back() = 1.0;
    return dedup;
}

inline bool same_grid(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k] - b[k]) > 1e-14) return false;
    }
    return true;
}

}  // namespace detail

inline HamiltonianTrack extract_hamiltonian(const SampledPath &x) {
    const std::size_t n = x.size();
    const Eigen::Index half = x.half_dim();
    const Matrix j = standard_J(half);
    const auto &t = x.times();
    HamiltonianTrack track;
    track.times = t;
    track.hams.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const detail::Stencil s = detail::derivative_stencil(t, k);
        const Matrix xdot = s.w0 * x[s.i0] + s.w1 * x[s.i0 + 1] + s.w2 * x[s.i0 + 2];
        const Matrix raw = -j * xdot * detail::checked_inverse(x[k], static_cast<std::ptrdiff_t>(k));
        const Matrix sym = 0.5 * (raw + raw.transpose());
        track.max_asymmetry = std::max(track.max_asymmetry, 0.5 * detail::max_abs(raw - raw.transpose()));
        track.hams.push_back(sym);
    }
    return track;
}

inline SampledPath SampledPath::resampled(const std::vector<double> &times) const {
    if (times.size() < 3 || std::abs(times.front()) > 1e-12 || std::abs(times.back() - 1.0) > 1e-12) {
        throw InvalidInput("resampled: grid must span [0, 1] with at least 3 points");
    }
    std::vector<Matrix> mats;
    mats.reserve(times.size());
    if (evaluator_) {
        for (double t : times) mats.push_back((*evaluator_)(t));
    } else {
        const HamiltonianTrack track = extract_hamiltonian(*this);
        const Matrix j = standard_J(half_dim());
        std::size_t k = 0;
        for (double t : times) {
            while (k + 1 < times_.size() && times_[k + 1] <= t + 1e-15) ++k;
            const double dt = t - times_[k];
            if (std::abs(dt) <= 1e-15) {
                mats.push_back(matrices_[k]);
            } else {
                mats.push_back(matrix_exp(Matrix(dt * j * track.hams[k])) * matrices_[k]);
            }
        }
    }
    return make_unchecked_path(times, std::move(mats), evaluator_);
}

inline SampledPath SampledPath::refined() const {
    std::vector<double> t;
    t.reserve(2 * times_.size() - 1);
    for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
        t.push_back(times_[k]);
        t.push_back(0.5 * (times_[k] + times_[k + 1]));
    }
    t.push_back(1.0);
    return resampled(t);
}

inline SampledPath compose(const SampledPath &x, const SampledPath &y) {
    if (x.dim() != y.dim()) throw InvalidInput("compose: dimension mismatch");
    std::shared_ptr<const SampledPath::Evaluator> ev;
    if (x.has_evaluator() && y.has_evaluator()) {
        const SampledPath::Evaluator fx = *x.evaluator();
        const SampledPath::Evaluator fy = *y.evaluator();
        ev = std::make_shared<const SampledPath::Evaluator>([fx, fy](double t) { return Matrix(fx(t) * fy(t)); });
    }
    if (detail::same_grid(x.times(), y.times())) {
        std::vector<Matrix> mats;
        mats.reserve(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) mats.push_back(x[k] * y[k]);
        return make_unchecked_path(x.times(), std::move(mats), std::move(ev));
    }
    const std::vector<double> grid = detail::merge_times(x.times(), y.times());
    const SampledPath xr = x.resampled(grid);
    const SampledPath yr = y.resampled(grid);
    std::vector<Matrix> mats;
    mats.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) mats.push_back(xr[k] * yr[k]);
    return make_unchecked_path(grid, std::move(mats), std::move(ev));
}

inline SampledPath invert(const SampledPath &y) {
    std::vector<Matrix> mats;
    mats.reserve(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) mats.push_back(detail::checked_inverse(y[k], static_cast<std::ptrdiff_t>(k)));
    std::shared_ptr<const SampledPath::Evaluator> ev;
    if (y.has_evaluator()) {
        const SampledPath::Evaluator fy = *y.evaluator();
        ev = std::make_shared<const SampledPath::Evaluator>([fy](double t) { return Matrix(fy(t).inverse()); });
    }
    return make_unchecked_path(y.times(), std::move(mats), std::move(ev));
}

// m^k for k >= 0 by repeated squaring.
inline Matrix matrix_power(const Matrix &m, long long k) {
    Matrix acc = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return acc;
}

// Pointwise power X(t)^k; negative k uses the pointwise inverse.
inline SampledPath power(const SampledPath &x, int k) {
    if (k < 0) return power(invert(x), -k);
    std::vector<Matrix> mats;
    mats.reserve(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) mats.push_back(matrix_power(x[s], k));
    std::shared_ptr<const SampledPath::Evaluator> ev;
    if (x.has_evaluator()) {
        const SampledPath::Evaluator fx = *x.evaluator();
        ev = std::make_shared<const SampledPath::Evaluator>([fx, k](double t) { return matrix_power(fx(t), k); });
    }
    return make_unchecked_path(x.times(), std::move(mats), std::move(ev));
}

// Conjugation W X W^{-1} by a constant symplectic matrix.
inline SampledPath conjugate(const Matrix &w, const SampledPath &x) {
    if (w.rows() != x.dim() || w.cols() != x.dim()) throw InvalidInput("conjugate: dimension mismatch");
    const Matrix winv = detail::checked_inverse(w, -1);
    std::vector<Matrix> mats;
    mats.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) mats.push_back(w * x[k] * winv);
    std::shared_ptr<const SampledPath::Evaluator> ev;
    if (x.has_evaluator()) {
        const SampledPath::Evaluator fx = *x.evaluator();
        ev = std::make_shared<const SampledPath::Evaluator>([fx, w, winv](double t) { return Matrix(w * fx(t) * winv); });
    }
    return make_unchecked_path(x.times(), std::move(mats), std::move(ev));
}

// j_i : Sp(2) -> Sp(2n) on one matrix; i is 1-based.
inline Matrix embed_block_matrix(const Matrix &a, Eigen::Index i, Eigen::Index n) {
    if (a.rows() != 2 || a.cols() != 2) throw InvalidInput("embed_block: source must be 2 x 2");
    if (n < 1 || i < 1 || i > n) throw InvalidInput("embed_block: index out of range");
    Matrix b = Matrix::Identity(2 * n, 2 * n);
    const Eigen::Index r = i - 1;
    b(r, r) = a(0, 0);
    b(r, r + n) = a(0, 1);
    b(r + n, r) = a(1, 0);
    b(r + n, r + n) = a(1, 1);
    return b;
}

inline SampledPath embed_block(const SampledPath &x, Eigen::Index i, Eigen::Index n) {
    if (x.dim() != 2) throw InvalidInput("embed_block: source path must have dimension 2");
    if (n < 1 || i < 1 || i > n) throw InvalidInput("embed_block: index out of range");
    std::vector<Matrix> mats;
    mats.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) mats.push_back(embed_block_matrix(x[k], i, n));
    std::shared_ptr<const SampledPath::Evaluator> ev;
    if (x.has_evaluator()) {
        const SampledPath::Evaluator fx = *x.evaluator();
        ev = std::make_shared<const SampledPath::Evaluator>([fx, i, n](double t) { return embed_block_matrix(fx(t), i, n); });
    }
    return make_unchecked_path(x.times(), std::move(mats), std::move(ev));
}

enum class ConeStatus { dominant, semipositive, undetermined, negative };

inline const char *to_string(ConeStatus s) {
    switch (s) {
        case ConeStatus::dominant: return "dominant";
        case ConeStatus::semipositive: return "semipositive";
        case ConeStatus::undetermined: return "undetermined";
        case ConeStatus::negative: return "negative";
    }
    return "?";
}

// How the verdict was obtained: from the pointwise (canonical) representative,
// or from a positive representative e^{itA} built for a unitary endpoint.
enum class Representative { canonical, unitary_lift };

inline const char *to_string(Representative r) {
    return r == Representative::canonical ? "canonical" : "unitary_lift";
}

struct ConeVerdict {
    ConeStatus status = ConeStatus::undetermined;
    double min_eigenvalue_over_path = 0.0;
    double tol = kStructuralTol;
    double discretization_error = 0.0;
    Representative representative = Representative::canonical;

    // Certifies membership in the closed cone.
    [[nodiscard]] bool certified() const {
        return status == ConeStatus::dominant || status == ConeStatus::semipositive;
    }
};

// Status from the smallest Hamiltonian eigenvalue m and a discretization
// error estimate e:  dominant if m - e >= tol, semipositive if m - e >= -tol,
// negative if m + e < -tol, undetermined otherwise.
inline ConeStatus status_from_bounds(double min_eig, double err, double tol) {
    if (min_eig - err >= tol) return ConeStatus::dominant;
    if (min_eig - err >= -tol) return ConeStatus::semipositive;
    if (min_eig + err < -tol) return ConeStatus::negative;
    return ConeStatus::undetermined;
}

inline double min_hamiltonian_eigenvalue(const HamiltonianTrack &track) {
    double m = std::numeric_limits<double>::infinity();
    for (const Matrix &h : track.hams) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        m = std::min(m, es.eigenvalues()(0));
    }
    return m;
}

inline ConeVerdict classify_cone(const SampledPath &x, double tol = kStructuralTol) {
    const HamiltonianTrack track = extract_hamiltonian(x);
    ConeVerdict v;
    v.tol = tol;
    v.min_eigenvalue_over_path = min_hamiltonian_eigenvalue(track);
    v.discretization_error = track.max_asymmetry;
    v.status = status_from_bounds(v.min_eigenvalue_over_path, v.discretization_error, tol);
    return v;
}

// Conservative test of X >= Y on the canonical representative X Y^{-1}.  A
// negative verdict does not refute the order.
inline ConeVerdict order_leq(const SampledPath &y, const SampledPath &x, double tol = kStructuralTol) {
    if (x.dim() != y.dim()) throw InvalidInput("order_leq: dimension mismatch");
    return classify_cone(compose(x, invert(y)), tol);
}

}  // namespace symporder
