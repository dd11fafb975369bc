#pragma once

// Acceptance checks, shared by the acceptance test binary and `symporder verify`.
// Each check returns a pass flag and a one-line summary of what was measured.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "symporder/maslov.hpp"
#include "symporder/matrix_core.hpp"
#include "symporder/order_metric.hpp"
#include "symporder/path_calculus.hpp"
#include "symporder/paths.hpp"
#include "symporder/prequantization.hpp"
#include "symporder/random.hpp"

namespace symporder::acceptance {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

enum class Suite { linear, quant, all };

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

// Diagonal unitary path with angles a_j (t + eps_j sin(2 pi t) / 2 pi).
inline SampledPath wobbly_diagonal(rnd::Engine &g, Eigen::Index n, double lo, double hi, std::size_t samples) {
    std::vector<std::function<double(double)>> angles;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = rnd::uniform(g, lo, hi);
        const double eps = rnd::uniform(g, -0.5, 0.5);
        angles.emplace_back([a, eps](double t) { return a * (t + eps * std::sin(kTwoPi * t) / kTwoPi); });
    }
    return paths::diagonal_unitary(std::move(angles), samples);
}

inline quant::LeafFunction random_trig(rnd::Engine &g, std::size_t points, int modes, double amp) {
    std::vector<double> c(static_cast<std::size_t>(modes)), d(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
        c[static_cast<std::size_t>(m)] = rnd::uniform(g, -amp, amp) / (m + 1);
        d[static_cast<std::size_t>(m)] = rnd::uniform(g, -amp, amp) / (m + 1);
    }
    return quant::LeafFunction::sample({points}, [&](std::span<const double> p) {
               double v = 0.0;
               for (int m = 0; m < modes; ++m) {
                   v += c[static_cast<std::size_t>(m)] * std::cos(kTwoPi * (m + 1) * p[0]) +
                        d[static_cast<std::size_t>(m)] * std::sin(kTwoPi * (m + 1) * p[0]);
               }
               return v;
           })
        .normalized_copy();
}

inline quant::QuantElement random_dominant(rnd::Engine &g, std::size_t points) {
    quant::LeafFunction f = random_trig(g, points, 4, 2.0);
    const double s = -f.min() + rnd::uniform(g, 0.05, 2.0);
    return {s, std::move(f)};
}

}  // namespace detail

// 1. Maslov index of k-fold rotation loops.
inline CheckResult check_rotation_loops() {
    CheckResult r{1, "maslov of rotation loops"};
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double mu = maslov_index(paths::rotation(kTwoPi * k, 1, 1024)).value;
        worst = std::max(worst, std::abs(mu - kTwoPi * k));
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = worst <= 1e-8 && r.seconds < 1.0;
    r.detail = "max |mu - 2 pi k| = " + detail::fmt(worst) + (r.seconds < 1.0 ? ", runtime under 1 s" : ", runtime over 1 s");
    return r;
}

// 2. Trace quadrature against the phase count on random unitary paths.
inline CheckResult check_trace_formula(std::uint64_t seed) {
    CheckResult r{2, "trace formula"};
    double worst = 0.0, worst_exact = 0.0, min_order = 1e300;
    int measured = 0;
    for (int i = 0; i < 100; ++i) {
        rnd::Engine g = rnd::stream(seed, 200 + static_cast<std::uint64_t>(i));
        const Eigen::Index n = i < 50 ? 1 : 2;
        const CMatrix a = rnd::hermitian(g, n, 1.0);
        const CMatrix b = rnd::hermitian(g, n, 1.0);
        const double exact = (a.trace() + b.trace()).real();
        const SampledPath fine = rnd::unitary_path(a, b, 2048);
        const SampledPath coarse = rnd::unitary_path(a, b, 1025);
        const double mu = maslov_index(fine).value;
        const double d_fine = std::abs(maslov_via_trace(fine) - mu);
        const double d_coarse = std::abs(maslov_via_trace(coarse) - maslov_index(coarse).value);
        worst = std::max(worst, d_fine);
        worst_exact = std::max(worst_exact, std::abs(mu - exact));
        if (d_coarse > 1e-11) {
            min_order = std::min(min_order, std::log2(d_coarse / std::max(d_fine, 1e-300)));
            ++measured;
        }
    }
    r.passed = worst <= 1e-5 && worst_exact <= 1e-8 && measured > 0 && min_order >= 1.8;
    r.detail = "max |trace - index| = " + detail::fmt(worst) + ", max |index - tr(A+B)| = " +
               detail::fmt(worst_exact) + ", min order " + detail::fmt(min_order) + " over " +
               std::to_string(measured) + " paths";
    return r;
}

// 3. Positive paths to random positive diagonal symplectic targets.
inline CheckResult check_positive_paths(std::uint64_t seed) {
    CheckResult r{3, "positive-path synthesis"};
    double worst_end = 0.0, min_eig = 1e300, worst_excess = -1e300;
    for (int i = 0; i < 50; ++i) {
        rnd::Engine g = rnd::stream(seed, 300 + static_cast<std::uint64_t>(i));
        const Eigen::Index n = i < 25 ? 1 : 2;
        Matrix p = Matrix::Zero(2 * n, 2 * n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double lam = std::exp(rnd::uniform(g, std::log(0.1), std::log(10.0)));
            p(j, j) = lam;
            p(n + j, n + j) = 1.0 / lam;
        }
        const SampledPath x = positive_path_to(p);
        worst_end = std::max(worst_end, symporder::detail::max_abs(x.endpoint() - p));
        min_eig = std::min(min_eig, min_hamiltonian_eigenvalue(extract_hamiltonian(x)));
        worst_excess = std::max(worst_excess, maslov_index(x).value - 2 * kTwoPi * static_cast<double>(n));
    }
    r.passed = worst_end <= 1e-8 && min_eig > 1e-6 && worst_excess <= 1e-6;
    r.detail = "max endpoint error " + detail::fmt(worst_end) + ", min Hamiltonian eigenvalue " +
               detail::fmt(min_eig) + ", max mu - 4 pi n = " + detail::fmt(worst_excess);
    return r;
}

// 4. Redistribution of eigenvalues with a prescribed trace.
inline CheckResult check_redistribution(std::uint64_t seed) {
    CheckResult r{4, "eigenvalue redistribution"};
    double worst_trace = 0.0, min_eig = 1e300, worst_gap_excess = -1e300, worst_end = 0.0;
    for (int i = 0; i < 100; ++i) {
        rnd::Engine g = rnd::stream(seed, 400 + static_cast<std::uint64_t>(i));
        const Eigen::Index n = i % 2 == 0 ? 2 : 3;
        const CMatrix a = rnd::hermitian(g, n, 3.0);
        const double tr = a.trace().real();
        const double nn = static_cast<double>(n);
        const double j0 = std::ceil((kTwoPi * nn - tr) / kTwoPi);
        const double target = tr + kTwoPi * (j0 + rnd::uniform_int(g, 0, 5));
        const RedistributedSpectrum out = redistribute_eigenvalues(a, target);
        worst_trace = std::max(worst_trace, std::abs(out.eigenvalues.sum() - target));
        min_eig = std::min(min_eig, out.eigenvalues.minCoeff());
        worst_gap_excess =
            std::max(worst_gap_excess, out.eigenvalues.maxCoeff() - out.eigenvalues.minCoeff() - kTwoPi * nn);
        worst_end = std::max(worst_end,
                             symporder::detail::max_abs(exp_i_hermitian(out.reassembled()) - exp_i_hermitian(a)));
    }
    r.passed = worst_trace <= 1e-9 && min_eig >= 0.0 && worst_gap_excess <= 1e-9 && worst_end <= 1e-8;
    r.detail = "max trace error " + detail::fmt(worst_trace) + ", min eigenvalue " + detail::fmt(min_eig) +
               ", max gap - 2 pi n = " + detail::fmt(worst_gap_excess) + ", max endpoint error " +
               detail::fmt(worst_end);
    return r;
}

// 5. Growth of commuting diagonal unitary dominants.
inline CheckResult check_hand_theorem(std::uint64_t seed) {
    CheckResult r{5, "relative growth of commuting unitaries"};
    const int n = 64;
    double worst_slack = 1e300;
    bool all_found = true;
    for (int i = 0; i < 20; ++i) {
        rnd::Engine g = rnd::stream(seed, 500 + static_cast<std::uint64_t>(i));
        const Eigen::Index dim = i % 2 == 0 ? 1 : 2;
        const SampledPath x = detail::wobbly_diagonal(g, dim, 4 * kPi, 6 * kPi, 128);
        const SampledPath y = detail::wobbly_diagonal(g, dim, 4 * kPi, 6 * kPi, 128);
        const double ratio = maslov_index(y).value / maslov_index(x).value;
        const std::optional<int> gn = gamma_n_bruteforce(x, y, n, 3 * n);
        if (!gn) {
            all_found = false;
            continue;
        }
        const double err = std::abs(static_cast<double>(*gn) / n - ratio);
        worst_slack = std::min(worst_slack, (1.0 + ratio) / n - err);
    }
    r.passed = all_found && worst_slack >= 0.0;
    r.detail = "min of (1 + ratio)/n - |gamma_n/n - ratio| = " + detail::fmt(worst_slack) + " at n = 64" +
               (all_found ? "" : ", some gamma_n not found");
    return r;
}

// Defect bound used for homogenization intervals: twice the sampled defect.
inline double empirical_defect(std::uint64_t seed, Eigen::Index dim, PairFamily family = PairFamily::general) {
    return 2.0 * quasimorphism_defect_sample(64, dim, seed, family);
}

// 6. Coordinates on Z against K and against the order.
inline CheckResult check_isometry(std::uint64_t seed) {
    CheckResult r{6, "isometry to R"};
    const int k_max = 4;
    const double c = std::max(empirical_defect(seed, 4, PairFamily::commuting_unitary), 1e-9);
    std::vector<SampledPath> xs;
    std::vector<ZPoint> zs;
    for (int i = 0; i < 10; ++i) {
        rnd::Engine g = rnd::stream(seed, 600 + static_cast<std::uint64_t>(i));
        xs.push_back(detail::wobbly_diagonal(g, 2, 2 * kPi, 8 * kPi, 128));
        zs.push_back(z_coordinate(xs.back(), k_max, c));
    }
    double worst_k = 0.0, worst_order = -1e300;
    int certified = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            const double slack = 0.5 * (zs[i].hi - zs[i].lo) + 0.5 * (zs[j].hi - zs[j].lo) + 1e-12;
            if (i < j) {
                const Estimate kk = pseudo_distance_K(xs[i], xs[j], k_max, c);
                const double dz = std::abs(zs[i].coordinate - zs[j].coordinate);
                const double miss = std::max(kk.lo - dz, dz - kk.hi);
                worst_k = std::max(worst_k, std::max(0.0, miss - slack));
            }
            if (certify_order(xs[j], xs[i]).certified()) {  // X_i >= X_j
                ++certified;
                worst_order = std::max(worst_order, zs[j].coordinate - zs[i].coordinate - slack);
            }
        }
    }
    r.passed = worst_k == 0.0 && certified > 0 && worst_order <= 0.0;
    r.detail = "max |dz| - K excess " + detail::fmt(worst_k) + ", " + std::to_string(certified) +
               " certified pairs, max order violation " + detail::fmt(worst_order);
    return r;
}

// 7. Homogenization rate against the sampled defect; exact additivity on loops
// and commuting pairs.
inline CheckResult check_defect(std::uint64_t seed) {
    CheckResult r{7, "quasimorphism defect"};
    const double c = empirical_defect(seed, 2);
    const int k_max = 8;
    double worst = -1e300;
    for (int i = 0; i < 20; ++i) {
        rnd::Engine g = rnd::stream(seed, 700 + static_cast<std::uint64_t>(i));
        const SampledPath x = rnd::symplectic_path(g, 1, kDefaultSamples, 0.2, 0.8);
        const std::vector<double> seq = homogenize(x, 2 * k_max);
        for (int k = 1; k <= k_max; ++k) {
            const double diff = std::abs(seq[static_cast<std::size_t>(k - 1)] - seq[static_cast<std::size_t>(2 * k - 1)]);
            worst = std::max(worst, diff - c / k);
        }
    }
    const double loops = quasimorphism_defect_sample(32, 4, seed, PairFamily::loops);
    const double commuting = quasimorphism_defect_sample(32, 4, seed, PairFamily::commuting_unitary);
    r.passed = worst <= 0.0 && loops <= 1e-6 && commuting <= 1e-6;
    r.detail = "C_emp = " + detail::fmt(c) + ", max (diff - C/k) = " + detail::fmt(worst) + ", loop defect " +
               detail::fmt(loops) + ", commuting defect " + detail::fmt(commuting);
    return r;
}

// 8. Growth and K on grid functions.
inline CheckResult check_quant_growth(std::uint64_t seed) {
    CheckResult r{8, "quantomorphism gamma and K"};
    double worst_growth = -1e300, worst_k = 0.0;
    for (int i = 0; i < 20; ++i) {
        rnd::Engine g = rnd::stream(seed, 800 + static_cast<std::uint64_t>(i));
        const quant::QuantElement a = detail::random_dominant(g, 1024);
        const quant::QuantElement b = detail::random_dominant(g, 1024);
        const double gam = quant::gamma_quant(a, b);
        const double slack = 1e-12 * std::max(1.0, std::abs(gam));
        for (long long n = 1; n <= 10000; n *= 10) {
            const double q = static_cast<double>(quant::gamma_n_quant_bruteforce(a, b, n)) / static_cast<double>(n);
            worst_growth = std::max({worst_growth, gam - q - slack, q - gam - 1.0 / static_cast<double>(n) - slack});
        }
        const double k_ref = std::max(std::log(gam), std::log(quant::gamma_quant(b, a)));
        worst_k = std::max(worst_k, std::abs(quant::k_quant(a, b) - k_ref));
    }
    r.passed = worst_growth <= 0.0 && worst_k <= 1e-12;
    r.detail = "max bracket violation " + detail::fmt(worst_growth) + ", max |K - max log gamma| = " +
               detail::fmt(worst_k);
    return r;
}

// 9. Distance to the rotation curve against direct minimization over t.
inline CheckResult check_rotation_distance() {
    CheckResult r{9, "rotation-curve distance"};
    const quant::LeafFunction f =
        quant::LeafFunction::sample({1024}, [](std::span<const double> p) { return std::cos(kTwoPi * p[0]); })
            .normalized_copy();
    const double s = 2.0;
    const quant::RotationDistance closed = quant::rotation_curve_distance(s, f);
    const quant::QuantElement a{s, f};
    const quant::LeafFunction zero({1024}, std::vector<double>(1024, 0.0));
    auto k_at = [&](double t) { return quant::k_quant(a, quant::QuantElement{t, zero}); };

    // Coarse grid of 1e5 points over [s - |f|_-, s + |f|_+], then the same
    // number of points on the two cells around the coarse minimizer.
    const std::size_t points = 100000;
    double lo = s - (-f.min()), hi = s + f.max();
    double best = 1e300;
    for (int pass = 0; pass < 2; ++pass) {
        const double h = (hi - lo) / static_cast<double>(points - 1);
        std::size_t arg = 0;
        for (std::size_t i = 0; i < points; ++i) {
            const double v = k_at(lo + h * static_cast<double>(i));
            if (v < best) {
                best = v;
                arg = i;
            }
        }
        const double centre = lo + h * static_cast<double>(arg);
        lo = std::max(centre - h, s - (-f.min()) + 1e-15);
        hi = centre + h;
    }
    const double err_direct = std::abs(closed.distance - best);
    const double err_half_log3 = std::abs(closed.distance - 0.5 * std::log(3.0));

    double worst_zero = 0.0;
    for (int i = 1; i <= 10; ++i) {
        worst_zero = std::max(worst_zero, std::abs(quant::rotation_curve_distance(0.5 * i, zero).distance));
    }
    r.passed = err_direct <= 1e-6 && err_half_log3 <= 1e-6 && worst_zero == 0.0;
    r.detail = "|closed - direct| = " + detail::fmt(err_direct) + ", |closed - log(3)/2| = " +
               detail::fmt(err_half_log3) + ", max distance for F = 0: " + detail::fmt(worst_zero);
    return r;
}

// 10. The embedding F -> e^F into Z is isometric for the max distance.
inline CheckResult check_embedding(std::uint64_t seed) {
    CheckResult r{10, "isometric embedding"};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        rnd::Engine g = rnd::stream(seed, 1000 + static_cast<std::uint64_t>(i));
        auto draw = [&]() {
            if (i % 2 == 0) return detail::random_trig(g, 1024, 5, 1.5);
            std::vector<double> c(4);
            for (auto &v : c) v = rnd::uniform(g, -1.0, 1.0);
            return quant::LeafFunction::sample({32, 32}, [&c](std::span<const double> p) {
                       return c[0] * std::cos(kTwoPi * p[0]) + c[1] * std::sin(kTwoPi * p[1]) +
                              c[2] * std::cos(kTwoPi * (p[0] + p[1])) + c[3] * std::sin(4 * kPi * p[0]);
                   })
                .normalized_copy();
        };
        const quant::LeafFunction f = draw();
        const quant::LeafFunction h = draw();
        worst = std::max(worst, std::abs(quant::k_quant(quant::embed_into_Z(f), quant::embed_into_Z(h)) -
                                         quant::max_distance(f, h)));
    }
    r.passed = worst <= 1e-12;
    r.detail = "max |K(embed F, embed G) - |F - G|_max| = " + detail::fmt(worst);
    return r;
}

// 11. Calabi-Weinstein invariant of normalized families.
inline CheckResult check_calabi_weinstein(std::uint64_t seed) {
    CheckResult r{11, "Calabi-Weinstein invariant"};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        rnd::Engine g = rnd::stream(seed, 1100 + static_cast<std::uint64_t>(i));
        const int slices = rnd::uniform_int(g, 2, 40);
        std::vector<quant::LeafFunction> fam;
        std::vector<double> times;
        double t = 0.0;
        for (int k = 0; k < slices; ++k) {
            times.push_back(t);
            t += rnd::uniform(g, 0.1, 1.0);
            fam.push_back(detail::random_trig(g, 256, 6, 5.0).scaled(1.0 + t));
        }
        for (double &v : times) v /= times.back();
        worst = std::max(worst, std::abs(quant::calabi_weinstein(fam, {}, i % 2 == 0 ? times : std::vector<double>{})));
    }
    r.passed = worst <= 1e-12;
    r.detail = "max |cw| = " + detail::fmt(worst);
    return r;
}

struct Check {
    int id;
    const char *name;
    std::function<CheckResult()> fn;
};

inline std::vector<CheckResult> run(Suite suite, std::uint64_t seed) {
    std::vector<Check> checks;
    if (suite != Suite::quant) {
        checks.push_back({1, "maslov of rotation loops", [] { return check_rotation_loops(); }});
        checks.push_back({2, "trace formula", [seed] { return check_trace_formula(seed); }});
        checks.push_back({3, "positive-path synthesis", [seed] { return check_positive_paths(seed); }});
        checks.push_back({4, "eigenvalue redistribution", [seed] { return check_redistribution(seed); }});
        checks.push_back({5, "relative growth of commuting unitaries", [seed] { return check_hand_theorem(seed); }});
        checks.push_back({6, "isometry to R", [seed] { return check_isometry(seed); }});
        checks.push_back({7, "quasimorphism defect", [seed] { return check_defect(seed); }});
    }
    if (suite != Suite::linear) {
        checks.push_back({8, "quantomorphism gamma and K", [seed] { return check_quant_growth(seed); }});
        checks.push_back({9, "rotation-curve distance", [] { return check_rotation_distance(); }});
        checks.push_back({10, "isometric embedding", [seed] { return check_embedding(seed); }});
        checks.push_back({11, "Calabi-Weinstein invariant", [seed] { return check_calabi_weinstein(seed); }});
    }
    std::vector<CheckResult> out;
    for (const Check &c : checks) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = c.fn();
        } catch (const std::exception &e) {
            res = CheckResult{c.id, c.name, false, std::string("exception: ") + e.what()};
        }
        if (res.seconds == 0.0) {
            res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        out.push_back(std::move(res));
    }
    return out;
}

inline std::string format_line(const CheckResult &r) {
    std::ostringstream ss;
    ss << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail;
    return ss.str();
}

}  // namespace symporder::acceptance
