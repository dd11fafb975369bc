#pragma once

// Quantomorphisms generated by commuting Hamiltonians that are constant on
// the leaves of a Lagrangian foliation.  The manifold enters only through the
// leaf-parameter torus Lambda = T^d, sampled on a regular grid; a contact
// Hamiltonian s + F with F normalized generates the element e^{is} f~.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symporder/errors.hpp"

namespace symporder::quant {

inline constexpr double kNormalizationTol = 1e-12;

class LeafFunction {
  public:
    // Raw grid values; normalized() reports whether the grid mean vanishes.
    LeafFunction(std::vector<std::size_t> grid_shape, std::vector<double> values)
        : shape_(std::move(grid_shape)), values_(std::move(values)) {
        if (shape_.empty()) throw InvalidInput("LeafFunction: grid_shape is empty");
        std::size_t total = 1;
        for (std::size_t s : shape_) {
            if (s == 0) throw InvalidInput("LeafFunction: grid_shape entries must be positive");
            total *= s;
        }
        if (values_.size() != total) {
            throw InvalidInput("LeafFunction: expected " + std::to_string(total) + " values, got " +
                               std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v)) throw InvalidInput("LeafFunction: non-finite value");
        }
    }

    // Samples fn at the grid points p_i = index_i / shape_i of [0, 1)^d.
    static LeafFunction sample(std::vector<std::size_t> grid_shape,
                               const std::function<double(std::span<const double>)> &fn) {
        std::size_t total = 1;
        for (std::size_t s : grid_shape) total *= s;
        std::vector<double> vals(total);
        std::vector<double> p(grid_shape.size());
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (std::size_t ax = grid_shape.size(); ax-- > 0;) {
                const std::size_t idx = rem % grid_shape[ax];
                rem /= grid_shape[ax];
                p[ax] = static_cast<double>(idx) / static_cast<double>(grid_shape[ax]);
            }
            vals[flat] = fn(p);
        }
        return {std::move(grid_shape), std::move(vals)};
    }

    [[nodiscard]] const std::vector<std::size_t> &grid_shape() const { return shape_; }
    [[nodiscard]] const std::vector<double> &values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] double mean() const {
        return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
    }
    [[nodiscard]] double max() const { return *std::max_element(values_.begin(), values_.end()); }
    [[nodiscard]] double min() const { return *std::min_element(values_.begin(), values_.end()); }

    [[nodiscard]] bool normalized() const {
        double scale = 1.0;
        for (double v : values_) scale = std::max(scale, std::abs(v));
        return std::abs(mean()) <= kNormalizationTol * scale;
    }

    [[nodiscard]] LeafFunction normalized_copy() const {
        const double m = mean();
        std::vector<double> v = values_;
        for (double &x : v) x -= m;
        return {shape_, std::move(v)};
    }

    [[nodiscard]] LeafFunction scaled(double c) const {
        std::vector<double> v = values_;
        for (double &x : v) x *= c;
        return {shape_, std::move(v)};
    }

    [[nodiscard]] bool same_grid(const LeafFunction &o) const { return shape_ == o.shape_; }

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

// The element e^{is} f~ of V, generated by s + F.
struct QuantElement {
    double shift = 0.0;
    LeafFunction func;

    [[nodiscard]] double total_min() const { return shift + func.min(); }
    [[nodiscard]] bool dominant() const { return total_min() > 0.0; }
    [[nodiscard]] bool semipositive() const { return total_min() >= 0.0; }
};

struct HoferProfile {
    double plus = 0.0;
    double minus = 0.0;
    double plus_asym = 0.0;
    double minus_asym = 0.0;
};

namespace detail {

inline void require_normalized(const LeafFunction &f, const char *what) {
    if (!f.normalized()) throw DomainError(std::string(what) + ": function is not normalized");
}

inline void require_same_grid(const LeafFunction &a, const LeafFunction &b, const char *what) {
    if (!a.same_grid(b)) throw InvalidInput(std::string(what) + ": grid shapes differ");
}

inline void require_dominant(const QuantElement &a, const char *what) {
    if (!a.dominant()) throw DomainError(std::string(what) + ": element is not dominant (s + min F <= 0)");
}

}  // namespace detail

// For F in the commuting family: |f|_+ = max F, |f|_- = -min F, and the
// asymptotic parts coincide with them because f^n is generated by nF.
inline HoferProfile hofer_norms(const LeafFunction &f) {
    detail::require_normalized(f, "hofer_norms");
    HoferProfile h;
    h.plus = f.max();
    h.minus = -f.min();
    h.plus_asym = h.plus;
    h.minus_asym = h.minus;
    return h;
}

// Grid error bound for max/min of a function with |grad F| <= lipschitz:
// half the largest grid spacing times the bound.
inline double grid_extremum_error(const LeafFunction &f, double lipschitz) {
    double h = 0.0;
    for (std::size_t s : f.grid_shape()) h = std::max(h, 1.0 / static_cast<double>(s));
    return 0.5 * h * lipschitz * std::sqrt(static_cast<double>(f.grid_shape().size()));
}

struct OrderBridge {
    bool geq_id = false;  // e^{is} f~ >= 1   iff  |f|_- <= s
    bool leq_id = false;  // e^{is} f~ <= 1   iff  |f|_+ <= -s
};

inline OrderBridge order_bridge(double s, const LeafFunction &f) {
    const HoferProfile h = hofer_norms(f);
    return {h.minus <= s, h.plus <= -s};
}

// gamma(a, b) = max (G + t) / (F + s).
inline double gamma_quant(const QuantElement &a, const QuantElement &b) {
    detail::require_same_grid(a.func, b.func, "gamma_quant");
    detail::require_dominant(a, "gamma_quant");
    const auto &fv = a.func.values();
    const auto &gv = b.func.values();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fv.size(); ++i) best = std::max(best, (gv[i] + b.shift) / (fv[i] + a.shift));
    return best;
}

// Relative slack on the pointwise comparison n (G + t) <= m (F + s), so that
// an integer boundary attained in exact arithmetic is not lost to rounding.
inline constexpr double kBoundarySlack = 1e-12;

// gamma_n(a, b) = inf{m in Z : n (G + t) <= m (F + s) on the whole grid},
// found by bracketing and bisection on the pointwise predicate.
inline long long gamma_n_quant_bruteforce(const QuantElement &a, const QuantElement &b, long long n) {
    detail::require_same_grid(a.func, b.func, "gamma_n_quant_bruteforce");
    detail::require_dominant(a, "gamma_n_quant_bruteforce");
    if (n < 1) throw InvalidInput("gamma_n_quant_bruteforce: n must be at least 1");
    const auto &fv = a.func.values();
    const auto &gv = b.func.values();
    const double nn = static_cast<double>(n);
    auto holds = [&](long long m) {
        const double mm = static_cast<double>(m);
        for (std::size_t i = 0; i < fv.size(); ++i) {
            const double lhs = nn * (gv[i] + b.shift);
            const double rhs = mm * (fv[i] + a.shift);
            if (lhs > rhs + kBoundarySlack * std::max({1.0, std::abs(lhs), std::abs(rhs)})) return false;
        }
        return true;
    };
    // The predicate is monotone in m since F + s > 0.
    long long hi = 1;
    while (!holds(hi)) {
        if (hi > (1LL << 60)) throw NumericalError("gamma_n_quant_bruteforce: no admissible m");
        hi *= 2;
    }
    long long lo = hi;  // find some lo with !holds(lo)
    long long step = 1;
    while (holds(lo)) {
        if (step > (1LL << 60)) throw NumericalError("gamma_n_quant_bruteforce: predicate never fails");
        lo = hi - step;
        step *= 2;
    }
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (holds(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// K(a, b) = max |log(F + s) - log(G + t)|.
inline double k_quant(const QuantElement &a, const QuantElement &b) {
    detail::require_same_grid(a.func, b.func, "k_quant");
    detail::require_dominant(a, "k_quant");
    detail::require_dominant(b, "k_quant");
    const auto &fv = a.func.values();
    const auto &gv = b.func.values();
    double best = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        best = std::max(best, std::abs(std::log(fv[i] + a.shift) - std::log(gv[i] + b.shift)));
    }
    return best;
}

struct RotationDistance {
    double distance = 0.0;
    double t_star = 0.0;  // rotation e^{it*} realizing the distance
};

// Distance from e^{is} f~ to the rotation curve {e^{it}}:
// 1/2 log((s + |f|_+,inf) / (s - |f|_-,inf)), attained at
// t* = sqrt((s + |f|_+,inf)(s - |f|_-,inf)).
inline RotationDistance rotation_curve_distance(double s, const LeafFunction &f) {
    const HoferProfile h = hofer_norms(f);
    if (!(s - h.minus_asym > 0.0)) {
        throw DomainError("rotation_curve_distance: s must exceed the negative asymptotic norm");
    }
    const double upper = s + h.plus_asym;
    const double lower = s - h.minus_asym;
    return {0.5 * (std::log(upper) - std::log(lower)), std::exp(0.5 * (std::log(upper) + std::log(lower)))};
}

// The element generated by e^F: shift = mean(e^F), func = e^F - mean.
inline QuantElement embed_into_Z(const LeafFunction &f) {
    detail::require_normalized(f, "embed_into_Z");
    std::vector<double> e(f.values().size());
    std::transform(f.values().begin(), f.values().end(), e.begin(), [](double v) { return std::exp(v); });
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    for (double &v : e) v -= mean;
    return {mean, LeafFunction(f.grid_shape(), std::move(e))};
}

inline double max_distance(const LeafFunction &f, const LeafFunction &g) {
    detail::require_same_grid(f, g, "max_distance");
    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f.values()[i] - g.values()[i]));
    return best;
}

// cw = int_0^1 dt int_M F_t omega^n, the inner integral as a weighted grid
// mean with weights normalized to unit total volume; trapezoid in time.  Empty
// weights mean uniform volume; empty times mean a uniform grid on [0, 1].
inline double calabi_weinstein(const std::vector<LeafFunction> &family, const std::vector<double> &weights = {},
                               const std::vector<double> &times = {}) {
    if (family.size() < 2) throw InvalidInput("calabi_weinstein: need at least two time slices");
    for (const LeafFunction &f : family) detail::require_same_grid(family.front(), f, "calabi_weinstein");
    const std::size_t cells = family.front().size();
    if (!weights.empty() && weights.size() != cells) throw InvalidInput("calabi_weinstein: weight shape mismatch");
    if (!times.empty() && times.size() != family.size()) throw InvalidInput("calabi_weinstein: times length mismatch");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw InvalidInput("calabi_weinstein: times are not strictly increasing");
    }

    double wsum = 0.0;
    if (!weights.empty()) {
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("calabi_weinstein: weights must be nonnegative");
            wsum += w;
        }
        if (!(wsum > 0.0)) throw InvalidInput("calabi_weinstein: weights sum to zero");
    }
    auto slice_mean = [&](const LeafFunction &f) {
        if (weights.empty()) return f.mean();
        double acc = 0.0;
        for (std::size_t i = 0; i < cells; ++i) acc += weights[i] * f.values()[i];
        return acc / wsum;
    };
    auto time_at = [&](std::size_t k) {
        return times.empty() ? static_cast<double>(k) / static_cast<double>(family.size() - 1) : times[k];
    };
    double total = 0.0;
    double prev = slice_mean(family.front());
    for (std::size_t k = 1; k < family.size(); ++k) {
        const double cur = slice_mean(family[k]);
        total += 0.5 * (time_at(k) - time_at(k - 1)) * (prev + cur);
        prev = cur;
    }
    return total;
}

}  // namespace symporder::quant
