#pragma once

// Relative growth, the pseudo-distance K and the coordinate on Z for the
// linear group.  Brute-force growth counts use certified order tests; the
// closed forms are ratios of (homogenized) Maslov indices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "symporder/maslov.hpp"
#include "symporder/path_calculus.hpp"

namespace symporder {

// A value with an enclosing interval [lo, hi].
struct Estimate {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
    [[nodiscard]] double radius() const { return 0.5 * (hi - lo); }
};

inline bool is_unitary_path(const SampledPath &x, double tol = kStructuralTol) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!commutes_with_J(x[k], tol)) return false;
    }
    return true;
}

inline bool is_unitary_matrix(const Matrix &a, double tol = kStructuralTol) {
    return commutes_with_J(a, tol) &&
           detail::max_abs(a.transpose() * a - Matrix::Identity(a.rows(), a.cols())) <= tol;
}

// Verdict for an element whose endpoint is unitary.  Such a path is homotopic
// to its unitary projection, and an element of the cover of U(n) with endpoint
// eigenvalues e^{i psi_j} and Maslov index mu contains e^{itA}, A >= 0, iff the
// angles admit nonnegative lifts summing to mu.  The lifts are built by
// distributing the missing 2 pi's to the smallest reduced angles.
inline ConeVerdict unitary_lift_verdict(const SampledPath &d, double tol = kStructuralTol,
                                        const MaslovOptions &opts = {}) {
    if (!is_unitary_matrix(d.endpoint(), 1e-8)) throw InvalidInput("unitary_lift_verdict: endpoint is not unitary");
    const Eigen::Index n = d.half_dim();
    const double mu = maslov_index(d, opts).value;

    Eigen::ComplexEigenSolver<CMatrix> es(real_to_complex(d.endpoint()), false);
    std::vector<double> angles;
    for (Eigen::Index i = 0; i < n; ++i) {
        double a = std::arg(es.eigenvalues()(i));
        if (a < 0) a += kTwoPi;
        if (a > kTwoPi - 1e-9) a = 0.0;
        angles.push_back(a);
    }
    std::sort(angles.begin(), angles.end());
    double sum = 0.0;
    for (double a : angles) sum += a;

    ConeVerdict v;
    v.tol = tol;
    v.representative = Representative::unitary_lift;
    v.discretization_error = 1e-9;
    const double k_real = (mu - sum) / kTwoPi;
    const double k_round = std::round(k_real);
    if (std::abs(k_real - k_round) > 1e-6) throw NumericalError("unitary_lift_verdict: inconsistent Maslov index");
    const auto k = static_cast<long long>(k_round);
    if (k < 0) {
        v.status = ConeStatus::negative;
        v.min_eigenvalue_over_path = angles.front() + kTwoPi * static_cast<double>(k);
        return v;
    }
    const long long l = k / n;
    const long long m = k % n;
    double min_lift = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double lifted = angles[i] + kTwoPi * static_cast<double>(l);
        if (static_cast<long long>(i) < m) lifted += kTwoPi;
        min_lift = std::min(min_lift, lifted);
    }
    v.min_eigenvalue_over_path = min_lift;
    v.status = status_from_bounds(min_lift, v.discretization_error, tol);
    return v;
}

// Conservative certificate for X >= Y: the canonical representative first,
// then the unitary lift when X Y^{-1} ends at a unitary matrix.
inline ConeVerdict certify_order(const SampledPath &y, const SampledPath &x, double tol = kStructuralTol,
                                 const MaslovOptions &opts = {}) {
    if (x.dim() != y.dim()) throw InvalidInput("certify_order: dimension mismatch");
    const SampledPath diff = compose(x, invert(y));
    const ConeVerdict canonical = classify_cone(diff, tol);
    if (canonical.certified()) return canonical;
    if (is_unitary_matrix(diff.endpoint(), 1e-8)) {
        const ConeVerdict lift = unitary_lift_verdict(diff, tol, opts);
        if (lift.certified()) return lift;
    }
    return canonical;
}

inline void require_dominant(const SampledPath &x, const char *what, double tol = kStructuralTol) {
    if (classify_cone(x, tol).status != ConeStatus::dominant) {
        throw DomainError(std::string(what) + ": element is not dominant");
    }
}

enum class GrowthSearch { automatic, scan, bisect };

namespace detail {

inline SampledPath power_times(const SampledPath &xs, const SampledPath &y_neg, int p) {
    const SampledPath xp = power(xs, p);
    std::vector<Matrix> mats;
    mats.reserve(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) mats.push_back(xp[k] * y_neg[k]);
    std::shared_ptr<const SampledPath::Evaluator> ev;
    if (xs.has_evaluator() && y_neg.has_evaluator()) {
        const SampledPath::Evaluator fx = *xs.evaluator();
        const SampledPath::Evaluator fy = *y_neg.evaluator();
        ev = std::make_shared<const SampledPath::Evaluator>([fx, fy, p](double t) {
            const Matrix m = fx(t);
            const Matrix base = p >= 0 ? m : Matrix(m.inverse());
            return Matrix(matrix_power(base, std::abs(p)) * fy(t));
        });
    }
    return make_unchecked_path(xs.times(), std::move(mats), std::move(ev));
}

inline bool growth_certified(const SampledPath &diff, double tol, const MaslovOptions &opts) {
    if (classify_cone(diff, tol).certified()) return true;
    return is_unitary_matrix(diff.endpoint(), 1e-8) && unitary_lift_verdict(diff, tol, opts).certified();
}

}  // namespace detail

// Smallest p in [-p_max, p_max] with X^p >= Y^n certified; nullopt if none.
// For unitary X and Y the certificate is exact and monotone in p, and the
// automatic mode bisects instead of scanning.
inline std::optional<int> gamma_n_bruteforce(const SampledPath &x, const SampledPath &y, int n, int p_max,
                                             double tol = kStructuralTol, const MaslovOptions &opts = {},
                                             GrowthSearch search = GrowthSearch::automatic) {
    if (n < 1) throw InvalidInput("gamma_n_bruteforce: n must be at least 1");
    if (p_max < 0) throw InvalidInput("gamma_n_bruteforce: p_max must be nonnegative");
    if (x.dim() != y.dim()) throw InvalidInput("gamma_n_bruteforce: dimension mismatch");
    require_dominant(x, "gamma_n_bruteforce", tol);

    const SampledPath y_neg = power(y, -n);
    const SampledPath xs = detail::same_grid(x.times(), y_neg.times()) ? x : x.resampled(y_neg.times());
    // Sampling alone cannot see a step that turns by a multiple of 2 pi, so
    // the grid of X^p Y^{-n} is chosen from the angular rates of X and Y.
    const double rate_x = max_angular_rate(xs, tol);
    const double rate_y = max_angular_rate(y, tol);
    auto holds = [&](int p) {
        SampledPath diff = detail::power_times(xs, y_neg, p);
        const double rate = std::abs(p) * rate_x + n * rate_y;
        const auto needed = static_cast<std::size_t>(std::ceil(rate / (opts.step_bound / 2))) + 1;
        if (needed > diff.size() && diff.has_evaluator()) {
            if (needed > opts.max_samples) {
                throw ResolutionError("gamma_n_bruteforce: X^p Y^-n needs " + std::to_string(needed) + " samples");
            }
            diff = diff.resampled(uniform_times(needed));
        }
        return detail::growth_certified(diff, tol, opts);
    };

    if (search == GrowthSearch::automatic) {
        search = is_unitary_path(x, 1e-10) && is_unitary_path(y, 1e-10) ? GrowthSearch::bisect : GrowthSearch::scan;
    }
    if (search == GrowthSearch::bisect) {
        if (!holds(p_max)) return std::nullopt;
        if (holds(-p_max)) return -p_max;
        int lo = -p_max, hi = p_max;  // holds(hi), !holds(lo)
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            (holds(mid) ? hi : lo) = mid;
        }
        return hi;
    }
    for (int p = -p_max; p <= p_max; ++p) {
        if (holds(p)) return p;
    }
    return std::nullopt;
}

struct GrowthEstimate {
    std::vector<std::pair<int, std::optional<int>>> gamma_n_sequence;
    double limit_estimate = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> closed_form;
};

inline std::vector<int> default_growth_levels(int n_max = 64) {
    std::vector<int> ns;
    for (int n = 1; n <= n_max; n *= 2) ns.push_back(n);
    return ns;
}

// gamma_n at each requested n with p_max = p_factor * n; the limit estimate
// is gamma_n / n at the largest n that produced a value.
inline GrowthEstimate gamma_n_sequence(const SampledPath &x, const SampledPath &y, const std::vector<int> &ns,
                                       int p_factor = 4, double tol = kStructuralTol) {
    GrowthEstimate out;
    for (int n : ns) {
        const std::optional<int> g = gamma_n_bruteforce(x, y, n, p_factor * n, tol);
        out.gamma_n_sequence.emplace_back(n, g);
        if (g) out.limit_estimate = static_cast<double>(*g) / n;
    }
    return out;
}

// gamma(f, g) = mu(g) / mu(f) for unitary dominants.
inline double gamma_closed_unitary(const SampledPath &x, const SampledPath &y, double tol = kStructuralTol,
                                   const MaslovOptions &opts = {}) {
    if (!is_unitary_path(x, tol) || !is_unitary_path(y, tol)) {
        throw DomainError("gamma_closed_unitary: paths must be unitary");
    }
    require_dominant(x, "gamma_closed_unitary", tol);
    require_dominant(y, "gamma_closed_unitary", tol);
    const double mx = maslov_index(x, opts).value;
    if (mx <= 0) throw DomainError("gamma_closed_unitary: mu(X) must be positive");
    return maslov_index(y, opts).value / mx;
}

// mu~(X) from homogenize(X, k_max) with the interval +- C/k_max.
inline Estimate homogenized_maslov(const SampledPath &x, int k_max, double defect_bound,
                                   const MaslovOptions &opts = {}) {
    if (defect_bound < 0) throw InvalidInput("homogenized_maslov: defect bound must be nonnegative");
    const double v = homogenize(x, k_max, opts).back();
    const double r = defect_bound / k_max;
    return {v, v - r, v + r};
}

namespace detail {

inline Estimate ratio(const Estimate &num, const Estimate &den) {
    Estimate out;
    out.value = num.value / den.value;
    if (den.lo <= 0) {
        out.lo = -std::numeric_limits<double>::infinity();
        out.hi = std::numeric_limits<double>::infinity();
        return out;
    }
    const double c[] = {num.lo / den.lo, num.lo / den.hi, num.hi / den.lo, num.hi / den.hi};
    out.lo = *std::min_element(std::begin(c), std::end(c));
    out.hi = *std::max_element(std::begin(c), std::end(c));
    return out;
}

inline Estimate log_of(const Estimate &e) {
    const double ninf = -std::numeric_limits<double>::infinity();
    return {std::log(e.value), e.lo > 0 ? std::log(e.lo) : ninf, std::log(e.hi)};
}

}  // namespace detail

// gamma(X, Y) = mu~(Y) / mu~(X) for dominants.
inline Estimate gamma_closed_symplectic(const SampledPath &x, const SampledPath &y, int k_max,
                                        double defect_bound, double tol = kStructuralTol,
                                        const MaslovOptions &opts = {}) {
    require_dominant(x, "gamma_closed_symplectic", tol);
    require_dominant(y, "gamma_closed_symplectic", tol);
    const Estimate mx = homogenized_maslov(x, k_max, defect_bound, opts);
    if (mx.value <= 0) throw DomainError("gamma_closed_symplectic: homogenized index of X is not positive");
    return detail::ratio(homogenized_maslov(y, k_max, defect_bound, opts), mx);
}

// K(X, Y) = max{log gamma(X, Y), log gamma(Y, X)}.
inline Estimate pseudo_distance_K(const SampledPath &x, const SampledPath &y, int k_max, double defect_bound,
                                  double tol = kStructuralTol, const MaslovOptions &opts = {}) {
    require_dominant(x, "pseudo_distance_K", tol);
    require_dominant(y, "pseudo_distance_K", tol);
    const Estimate mx = homogenized_maslov(x, k_max, defect_bound, opts);
    const Estimate my = homogenized_maslov(y, k_max, defect_bound, opts);
    if (mx.value <= 0 || my.value <= 0) throw DomainError("pseudo_distance_K: homogenized index is not positive");
    const Estimate a = detail::log_of(detail::ratio(my, mx));
    const Estimate b = detail::log_of(detail::ratio(mx, my));
    return {std::max(a.value, b.value), std::max({a.lo, b.lo, 0.0}), std::max(a.hi, b.hi)};
}

struct ZPoint {
    SampledPath representative;
    double coordinate;  // log mu~
    double lo;
    double hi;
};

inline ZPoint z_coordinate(const SampledPath &x, int k_max, double defect_bound, double tol = kStructuralTol,
                           const MaslovOptions &opts = {}) {
    require_dominant(x, "z_coordinate", tol);
    const Estimate m = homogenized_maslov(x, k_max, defect_bound, opts);
    if (m.value <= 0) throw DomainError("z_coordinate: homogenized index is not positive");
    const Estimate l = detail::log_of(m);
    return {x, l.value, l.lo, l.hi};
}

}  // namespace symporder
