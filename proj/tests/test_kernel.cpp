#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "viscowave/kernel.hpp"

using namespace viscowave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Composite trapezoid of g(t - s) y(s) over a stored uniform trajectory.
double direct_trapezoid(const KernelSpec& k, const std::vector<double>& y, double dt) {
    const std::size_t n = y.size() - 1;
    const double t = static_cast<double>(n) * dt;
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * k(t - static_cast<double>(i) * dt) * y[i];
    }
    return dt * sum;
}

double iterate(const KernelSpec& k, const std::vector<double>& y, double dt) {
    double m = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) m = advance_memory(m, y[i - 1], y[i], dt, k);
    return m;
}

}  // namespace

TEST_CASE("kernel validation rejects inadmissible parameters", "[kernel]") {
    auto code = [](double a, double b) {
        try {
            (void)KernelSpec::validate(a, b);
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("expected an error");
        return Errc::InvalidConfig;
    };
    CHECK(code(0.0, 1.0) == Errc::NonPositiveMass);
    CHECK(code(-1.0, 1.0) == Errc::NonPositiveMass);
    CHECK(code(1.0, 0.0) == Errc::NonPositiveRate);
    CHECK(code(1.0, 1.0) == Errc::MassExceedsOne);
    CHECK(code(2.0, 1.0) == Errc::MassExceedsOne);
}

TEST_CASE("residual elasticity and decay constant", "[kernel]") {
    const auto k = KernelSpec::validate(1.0, 2.0);
    CHECK_THAT(k.l(), WithinAbs(0.5, 1e-15));
    CHECK(k.zeta() == 2.0);
    CHECK_THAT(KernelSpec::validate(0.5, 3.0).l(), WithinAbs(1.0 - 1.0 / 6.0, 1e-15));
    CHECK_THAT(KernelSpec::validate(1.0, 3.0).l(), WithinAbs(2.0 / 3.0, 1e-15));

    const auto none = KernelSpec::none();
    CHECK_FALSE(none.present());
    CHECK(none.l() == 1.0);
    CHECK(none(0.0) == 0.0);
    CHECK(none.mass_up_to(5.0) == 0.0);
}

TEST_CASE("g0 matches a fine trapezoid quadrature", "[kernel]") {
    const auto k = KernelSpec::validate(1.0, 4.0);
    const double h = 1e-5;
    const int n = static_cast<int>(std::lround(1.0 / h));
    double sum = 0.5 * (k(0.0) + k(1.0));
    for (int i = 1; i < n; ++i) sum += k(i * h);
    const double oracle = h * sum;
    CHECK_THAT(g0_up_to(k, 1.0), WithinRel(oracle, 1e-9));
    CHECK_THAT(g0_up_to(k, 1.0), WithinAbs(0.245421, 1e-6));
    CHECK_THAT(g0_up_to(KernelSpec::validate(1.0, 2.0), 100.0), WithinAbs(0.5, 1e-12));
    CHECK(g0_up_to(k, 1e-14) < 1e-13);
    CHECK_THROWS_AS(g0_up_to(k, 0.0), Error);
}

TEST_CASE("memory recurrence worked examples", "[kernel]") {
    SECTION("constant input approaches the closed-form convolution") {
        const auto k = KernelSpec::validate(1.0, 2.0);
        const double dt = 1e-4;
        std::vector<double> ones(10001, 1.0);
        CHECK_THAT(iterate(k, ones, dt), WithinAbs(0.432332, 1e-6));
    }
    SECTION("zero input stays zero") {
        const auto k = KernelSpec::validate(1.0, 2.0);
        std::vector<double> zeros(100, 0.0);
        CHECK(iterate(k, zeros, 0.01) == 0.0);
    }
    SECTION("linear input") {
        const auto k = KernelSpec::validate(1.0 - 1e-12, 1.0);
        const double dt = 1e-4;
        std::vector<double> y(20001);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i) * dt;
        CHECK_THAT(iterate(k, y, dt), WithinAbs(1.0 + std::exp(-2.0), 1e-6));
    }
}

TEST_CASE("kernel properties on random admissible specs", "[kernel][property]") {
    std::mt19937 rng(20240611u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double beta = 0.1 + 10.0 * unit(rng);
        const double alpha = beta * (0.01 + 0.98 * unit(rng));
        const auto k = KernelSpec::validate(alpha, beta);
        REQUIRE(k.l() > 0.0);
        REQUIRE(k.l() < 1.0);
        double prev = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const double t = 0.2 * i;
            REQUIRE(k(t) > 0.0);
            REQUIRE_THAT(k.derivative(t), WithinRel(-k.zeta() * k(t), 1e-14));
            const double g0 = g0_up_to(k, t + 0.01);
            REQUIRE(g0 >= prev);
            REQUIRE(g0 <= alpha / beta);
            prev = g0;
        }
    }
}

TEST_CASE("recurrence equals direct trapezoid over the stored trajectory", "[kernel][property]") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double beta = 0.2 + 5.0 * unit(rng);
        const auto k = KernelSpec::validate(beta * 0.9 * unit(rng) + 1e-3, beta);
        const double dt = 1e-3 + 0.05 * unit(rng);
        const std::size_t n = 2 + static_cast<std::size_t>(400 * unit(rng));
        std::vector<double> y(n + 1);
        for (double& v : y) v = noise(rng);
        const double direct = direct_trapezoid(k, y, dt);
        const double rec = iterate(k, y, dt);
        double scale = 0.0;
        for (double v : y) scale += std::abs(v);
        REQUIRE(std::abs(rec - direct) <= 1e-12 * std::max(1.0, dt * scale * k.alpha()));
    }
}
