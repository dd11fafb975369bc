#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symporder/prequantization.hpp"
#include "symporder/random.hpp"

using namespace symporder;
using quant::LeafFunction;
using quant::QuantElement;

namespace {

LeafFunction cos_grid(std::size_t n) {
    return LeafFunction::sample({n}, [](std::span<const double> p) { return std::cos(kTwoPi * p[0]); }).normalized_copy();
}

LeafFunction random_grid(rnd::Engine &g, std::vector<std::size_t> shape, double amp) {
    std::size_t total = 1;
    for (std::size_t s : shape) total *= s;
    std::vector<double> v(total);
    for (double &x : v) x = rnd::uniform(g, -amp, amp);
    return LeafFunction(std::move(shape), std::move(v)).normalized_copy();
}

}  // namespace

TEST(LeafFunction, Validation) {
    EXPECT_THROW(LeafFunction({}, {}), InvalidInput);
    EXPECT_THROW(LeafFunction({0}, {}), InvalidInput);
    EXPECT_THROW(LeafFunction({3}, {1.0, 2.0}), InvalidInput);
    EXPECT_THROW(LeafFunction({2}, {1.0, std::numeric_limits<double>::infinity()}), InvalidInput);
    EXPECT_NO_THROW(LeafFunction({2, 3}, std::vector<double>(6, 0.0)));
}

TEST(LeafFunction, SamplesGridPointsLastAxisFastest) {
    const LeafFunction f = LeafFunction::sample({2, 4}, [](std::span<const double> p) { return 10 * p[0] + p[1]; });
    EXPECT_DOUBLE_EQ(f.values()[0], 0.0);
    EXPECT_DOUBLE_EQ(f.values()[1], 0.25);
    EXPECT_DOUBLE_EQ(f.values()[4], 5.0);
    EXPECT_DOUBLE_EQ(f.values()[7], 5.75);
}

TEST(LeafFunction, Normalization) {
    const LeafFunction f({4}, {1.0, 2.0, 3.0, 6.0});
    EXPECT_FALSE(f.normalized());
    const LeafFunction g = f.normalized_copy();
    EXPECT_TRUE(g.normalized());
    EXPECT_NEAR(g.mean(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(g.max(), 3.0);
    EXPECT_DOUBLE_EQ(g.min(), -2.0);
}

TEST(Hofer, NormsAndBridge) {
    const LeafFunction f = cos_grid(64);
    const quant::HoferProfile h = quant::hofer_norms(f);
    EXPECT_NEAR(h.plus, 1.0, 1e-15);
    EXPECT_NEAR(h.minus, 1.0, 1e-15);
    EXPECT_EQ(h.plus_asym, h.plus);
    EXPECT_EQ(h.minus_asym, h.minus);
    EXPECT_TRUE(quant::order_bridge(1.0, f).geq_id);
    EXPECT_FALSE(quant::order_bridge(0.9, f).geq_id);
    EXPECT_TRUE(quant::order_bridge(-1.0, f).leq_id);
    EXPECT_FALSE(quant::order_bridge(-0.5, f).leq_id);
    EXPECT_THROW(quant::hofer_norms(LeafFunction({2}, {1.0, 2.0})), DomainError);
}

TEST(Hofer, GridExtremumBound) {
    for (std::size_t n : {7u, 30u, 101u}) {
        const LeafFunction f = LeafFunction::sample({n}, [](std::span<const double> p) { return std::sin(kTwoPi * p[0] + 0.3); });
        EXPECT_LE(1.0 - f.max(), quant::grid_extremum_error(f, kTwoPi) + 1e-15) << n;
    }
}

TEST(QuantGamma, MatchesBisectionOracle) {
    for (std::uint64_t i = 0; i < 10; ++i) {
        rnd::Engine g = rnd::stream(40, i);
        const LeafFunction f = random_grid(g, {64}, 1.0), h = random_grid(g, {64}, 1.0);
        const QuantElement a{-f.min() + 0.3, f}, b{rnd::uniform(g, -2.0, 2.0), h};
        // Smallest c with G + t <= c (F + s) everywhere.
        double lo = -100, hi = 100;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            bool ok = true;
            for (std::size_t k = 0; k < f.size(); ++k) ok = ok && h.values()[k] + b.shift <= mid * (f.values()[k] + a.shift);
            (ok ? hi : lo) = mid;
        }
        EXPECT_NEAR(quant::gamma_quant(a, b), hi, 1e-12) << i;
    }
}

TEST(QuantGamma, BruteForceMatchesScanOracle) {
    for (std::uint64_t i = 0; i < 10; ++i) {
        rnd::Engine g = rnd::stream(41, i);
        const LeafFunction f = random_grid(g, {128}, 1.0), h = random_grid(g, {128}, 1.0);
        const QuantElement a{-f.min() + rnd::uniform(g, 0.05, 1.0), f}, b{rnd::uniform(g, -1.0, 2.0), h};
        std::vector<double> fv, gv;
        for (std::size_t k = 0; k < f.size(); ++k) {
            fv.push_back(f.values()[k] + a.shift);
            gv.push_back(h.values()[k] + b.shift);
        }
        for (long long n : {1LL, 7LL, 100LL, 1000LL}) {
            EXPECT_EQ(quant::gamma_n_quant_bruteforce(a, b, n), oracle::gamma_n_scan(fv, gv, n)) << i << " " << n;
        }
    }
}

TEST(QuantGamma, ExactBoundaryIsKept) {
    const LeafFunction z({4}, std::vector<double>(4, 0.0));
    // gamma(e^{i}, e^{3i}) = 3 exactly; gamma_n = 3n.
    EXPECT_EQ(quant::gamma_n_quant_bruteforce({1.0, z}, {3.0, z}, 10), 30);
    EXPECT_EQ(quant::gamma_n_quant_bruteforce({0.1, z}, {0.3, z}, 10), 30);
    EXPECT_EQ(quant::gamma_n_quant_bruteforce({1.0, z}, {-2.5, z}, 2), -5);
}

TEST(QuantGamma, Errors) {
    const LeafFunction f = cos_grid(8), g = cos_grid(16);
    EXPECT_THROW(quant::gamma_quant({2.0, f}, {2.0, g}), InvalidInput);
    EXPECT_THROW(quant::gamma_quant({0.5, f}, {2.0, f}), DomainError);
    EXPECT_THROW(quant::gamma_n_quant_bruteforce({2.0, f}, {2.0, f}, 0), InvalidInput);
    EXPECT_THROW(quant::k_quant({2.0, f}, {0.5, f}), DomainError);
}

TEST(QuantK, EqualsMaxOfLogGammas) {
    for (std::uint64_t i = 0; i < 10; ++i) {
        rnd::Engine g = rnd::stream(42, i);
        const LeafFunction f = random_grid(g, {8, 8}, 2.0), h = random_grid(g, {8, 8}, 2.0);
        const QuantElement a{-f.min() + 0.5, f}, b{-h.min() + 0.1, h};
        const double ref = std::max(std::log(quant::gamma_quant(a, b)), std::log(quant::gamma_quant(b, a)));
        EXPECT_NEAR(quant::k_quant(a, b), ref, 1e-12);
        EXPECT_NEAR(quant::k_quant(a, b), quant::k_quant(b, a), 1e-15);
        EXPECT_EQ(quant::k_quant(a, a), 0.0);
    }
}

TEST(RotationDistance, CosineAndGoldenSectionOracle) {
    const LeafFunction f = cos_grid(1024);
    const quant::RotationDistance r = quant::rotation_curve_distance(2.0, f);
    EXPECT_NEAR(r.distance, 0.5 * std::log(3.0), 1e-12);
    EXPECT_NEAR(r.t_star, std::sqrt(3.0), 1e-12);

    const LeafFunction zero({1024}, std::vector<double>(1024, 0.0));
    for (std::uint64_t i = 0; i < 8; ++i) {
        rnd::Engine g = rnd::stream(43, i);
        const LeafFunction h = random_grid(g, {256}, 1.5);
        const double s = -h.min() + rnd::uniform(g, 0.05, 3.0);
        const QuantElement a{s, h};
        const LeafFunction z256({256}, std::vector<double>(256, 0.0));
        const auto k_at = [&](double t) { return quant::k_quant(a, QuantElement{t, z256}); };
        const double direct = oracle::golden_min(k_at, s + h.min(), s + h.max());
        const quant::RotationDistance rd = quant::rotation_curve_distance(s, h);
        EXPECT_NEAR(rd.distance, direct, 1e-10) << i;
        EXPECT_NEAR(k_at(rd.t_star), rd.distance, 1e-12) << i;
    }
    EXPECT_EQ(quant::rotation_curve_distance(0.7, zero).distance, 0.0);
}

TEST(RotationDistance, DomainErrors) {
    const LeafFunction f = cos_grid(64);
    EXPECT_THROW(quant::rotation_curve_distance(1.0, f), DomainError);
    EXPECT_THROW(quant::rotation_curve_distance(0.5, f), DomainError);
    EXPECT_THROW(quant::rotation_curve_distance(2.0, LeafFunction({2}, {0.0, 1.0})), DomainError);
}

TEST(Embedding, IsometricAndNormalized) {
    for (std::uint64_t i = 0; i < 10; ++i) {
        rnd::Engine g = rnd::stream(44, i);
        const LeafFunction f = random_grid(g, {16, 16}, 3.0), h = random_grid(g, {16, 16}, 3.0);
        const QuantElement ef = quant::embed_into_Z(f), eh = quant::embed_into_Z(h);
        EXPECT_TRUE(ef.func.normalized());
        EXPECT_TRUE(ef.dominant());
        double mean = 0.0;
        for (double v : f.values()) mean += std::exp(v);
        EXPECT_NEAR(ef.shift, mean / static_cast<double>(f.size()), 1e-12 * ef.shift);
        EXPECT_NEAR(quant::k_quant(ef, eh), quant::max_distance(f, h), 1e-12);
    }
    EXPECT_THROW(quant::embed_into_Z(LeafFunction({2}, {1.0, 2.0})), DomainError);
}

TEST(CalabiWeinstein, NormalizedFamiliesVanish) {
    rnd::Engine g = rnd::stream(45, 0);
    std::vector<LeafFunction> fam;
    for (int k = 0; k < 9; ++k) fam.push_back(random_grid(g, {12, 5}, 4.0));
    EXPECT_NEAR(quant::calabi_weinstein(fam), 0.0, 1e-14);
}

TEST(CalabiWeinstein, TrapezoidOfSliceMeans) {
    // F_t = c(t) constant on the grid with c linear in t: the trapezoid is exact.
    std::vector<LeafFunction> fam;
    std::vector<double> times = {0.0, 0.2, 0.7, 1.0};
    for (double t : times) fam.emplace_back(std::vector<std::size_t>{3}, std::vector<double>(3, 1.0 + 2.0 * t));
    EXPECT_NEAR(quant::calabi_weinstein(fam, {}, times), 2.0, 1e-14);
    // Weighted volume: mean of (0, 0, 3) with weights (1, 1, 2) is 1.5.
    std::vector<LeafFunction> w{LeafFunction({3}, {0.0, 0.0, 3.0}), LeafFunction({3}, {0.0, 0.0, 3.0})};
    EXPECT_NEAR(quant::calabi_weinstein(w, {1.0, 1.0, 2.0}), 1.5, 1e-14);
}

TEST(CalabiWeinstein, Errors) {
    const LeafFunction a({3}, {0.0, 0.0, 0.0}), b({4}, {0.0, 0.0, 0.0, 0.0});
    EXPECT_THROW(quant::calabi_weinstein({a}), InvalidInput);
    EXPECT_THROW(quant::calabi_weinstein({a, b}), InvalidInput);
    EXPECT_THROW(quant::calabi_weinstein({a, a}, {1.0}), InvalidInput);
    EXPECT_THROW(quant::calabi_weinstein({a, a}, {1.0, -1.0, 1.0}), InvalidInput);
    EXPECT_THROW(quant::calabi_weinstein({a, a}, {}, {0.0}), InvalidInput);
}
