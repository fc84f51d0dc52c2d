#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "viscowave/simulate.hpp"

using namespace viscowave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double pi = std::numbers::pi;

namespace {

SimConfig single_mode(double gamma0, double v0) {
    SimConfig c;
    c.modes = 1;
    c.u0 = {gamma0};
    c.u1 = {v0};
    c.f0 = {v0};
    return c;
}

/// Classical RK4 for one mode of the delayed viscoelastic equation, with
/// the exponential memory carried as the extra state M' = alpha g - beta M.
/// The delayed velocity is read from a cubic Hermite interpolant of the
/// stored (v, v') samples; before t = 0 it is the constant history f0.
struct Rk4Oracle {
    double lambda = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double tau = 1.0;
    double f0 = 0.0;
    double h = 1e-3;
    std::vector<double> vs;
    std::vector<double> as;

    double delayed(double t) const {
        const double s = t - tau;
        if (s <= 1e-14 * tau) return f0;
        const double pos = s / h;
        auto k = static_cast<std::size_t>(std::floor(pos + 1e-9));
        if (k + 1 >= vs.size()) k = vs.size() - 2;
        const double x = pos - static_cast<double>(k);
        const double h00 = 2 * x * x * x - 3 * x * x + 1;
        const double h10 = x * x * x - 2 * x * x + x;
        const double h01 = -2 * x * x * x + 3 * x * x;
        const double h11 = x * x * x - x * x;
        return h00 * vs[k] + h10 * h * as[k] + h01 * vs[k + 1] + h11 * h * as[k + 1];
    }

    double accel(double t, double g, double v, double m) const {
        return -lambda * g + lambda * m - mu1 * v - mu2 * delayed(t);
    }

    /// Returns gamma at every multiple of h up to t_end.
    std::vector<double> solve(double g0, double v0, double t_end) {
        const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
        std::vector<double> out{g0};
        double g = g0;
        double v = v0;
        double m = 0.0;
        vs = {v};
        as = {accel(0.0, g, v, m)};
        for (std::size_t n = 0; n < steps; ++n) {
            const double t = static_cast<double>(n) * h;
            // The next node is needed for the delayed lookups inside this step
            // only when tau < h, which the callers avoid.
            auto f = [&](double tt, double gg, double vv, double mm, double& dg, double& dv, double& dm) {
                dg = vv;
                dv = accel(tt, gg, vv, mm);
                dm = alpha * gg - beta * mm;
            };
            double k1g, k1v, k1m, k2g, k2v, k2m, k3g, k3v, k3m, k4g, k4v, k4m;
            f(t, g, v, m, k1g, k1v, k1m);
            f(t + h / 2, g + h / 2 * k1g, v + h / 2 * k1v, m + h / 2 * k1m, k2g, k2v, k2m);
            f(t + h / 2, g + h / 2 * k2g, v + h / 2 * k2v, m + h / 2 * k2m, k3g, k3v, k3m);
            f(t + h, g + h * k3g, v + h * k3v, m + h * k3m, k4g, k4v, k4m);
            g += h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
            v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
            m += h / 6 * (k1m + 2 * k2m + 2 * k3m + k4m);
            vs.push_back(v);
            as.push_back(accel(t + h, g, v, m));
            out.push_back(g);
        }
        return out;
    }
};

double final_gamma(const SimConfig& c) { return run(c).samples.back().state.gamma[0]; }

}  // namespace

TEST_CASE("modal right-hand side worked examples", "[simulate]") {
    CHECK(modal_rhs(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0) == -1.0);
    CHECK(modal_rhs(0.5, 0.5, 0.0, 0.0, 4.0, 0.0, 0.0) == 0.0);
    CHECK_THAT(modal_rhs(0.0, 0.0, 1.0, 2.0, 1.0, 0.3, 0.1), WithinAbs(-0.5, 1e-15));
}

TEST_CASE("history buffer lags", "[simulate]") {
    HistoryBuffer h(1, 3);
    CHECK_THROWS_AS(h.lag(0), Error);
    for (int k = 0; k < 3; ++k) h.push(std::vector<double>{double(k)});
    CHECK_FALSE(h.filled());
    CHECK_THROWS_AS(h.delayed(), Error);
    h.push(std::vector<double>{3.0});
    CHECK(h.filled());
    CHECK(h.lag(0)[0] == 3.0);
    CHECK(h.lag(3)[0] == 0.0);
    CHECK(h.delayed()[0] == 0.0);
    h.push(std::vector<double>{4.0});
    CHECK(h.delayed()[0] == 1.0);
    CHECK_THROWS_AS(h.lag(4), Error);
    CHECK_THROWS_AS(h.lag(-1), Error);
    CHECK_THROWS_AS(h.push(std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("config validation", "[simulate]") {
    SimConfig c = single_mode(1.0, 0.0);
    c.u1 = {};
    CHECK_THROWS_AS(run(c), Error);
    c = single_mode(1.0, 0.0);
    c.steps_per_delay = 1;
    CHECK_THROWS_AS(run(c), Error);
    c = single_mode(1.0, 0.0);
    c.tau = 0.0;
    CHECK_THROWS_AS(run(c), Error);
}

TEST_CASE("t_end = 0 yields only the initial sample", "[simulate]") {
    SimConfig c = single_mode(1.0, 0.5);
    c.t_end = 0.0;
    const Trace tr = run(c);
    REQUIRE(tr.samples.size() == 1);
    CHECK(tr.samples[0].state.gamma[0] == 1.0);
    CHECK(tr.samples[0].state.v[0] == 0.5);
}

TEST_CASE("harmonic oscillator returns after one period", "[simulate]") {
    SimConfig c = single_mode(1.0, 0.0);
    c.tau = 2.0 * pi / 100.0;
    c.steps_per_delay = 10;
    c.t_end = 2.0 * pi;
    const Trace tr = run(c);
    const double dt = c.dt();
    CHECK_THAT(tr.samples.back().state.t, WithinAbs(2.0 * pi, 1e-12));
    CHECK(std::abs(tr.samples.back().state.gamma[0] - 1.0) <= 5.0 * dt * dt);
}

TEST_CASE("damped oscillator closed form", "[simulate]") {
    SimConfig c = single_mode(1.0, 0.0);
    c.mu1 = 0.2;
    c.tau = 0.01;
    c.steps_per_delay = 10;
    c.t_end = 10.0;
    const Trace tr = run(c);
    const double omega = std::sqrt(0.99);
    double err = 0.0;
    for (const Snapshot& s : tr.samples) {
        const double t = s.state.t;
        const double exact = std::exp(-0.1 * t) * (std::cos(omega * t) + 0.1 / omega * std::sin(omega * t));
        err = std::max(err, std::abs(s.state.gamma[0] - exact));
    }
    CHECK(err <= 1e-4);
}

TEST_CASE("first delay interval matches the constant-history solution", "[simulate]") {
    // On [0, tau] the delayed velocity is the constant c, so
    // g'' + g = -mu2 c with g(0) = g0, g'(0) = c.
    const double c0 = 0.3;
    const double mu2 = 0.7;
    SimConfig c = single_mode(1.0, c0);
    c.mu2 = mu2;
    c.tau = 1.0;
    c.steps_per_delay = 2000;
    c.t_end = 1.0;
    const Trace tr = run(c);
    double err = 0.0;
    for (const Snapshot& s : tr.samples) {
        const double t = s.state.t;
        const double exact = -mu2 * c0 + (1.0 + mu2 * c0) * std::cos(t) + c0 * std::sin(t);
        err = std::max(err, std::abs(s.state.gamma[0] - exact));
    }
    CHECK(err <= 1e-6);
}

TEST_CASE("memory and delay against an RK4 method-of-steps oracle", "[simulate]") {
    const double lambda = 4.0;
    const double tau = 0.5;
    const double t_end = 5.0;
    Rk4Oracle oracle;
    oracle.lambda = lambda;
    oracle.alpha = 1.0;
    oracle.beta = 3.0;
    oracle.mu1 = 0.1;
    oracle.mu2 = 0.4;
    oracle.tau = tau;
    oracle.f0 = 0.2;
    oracle.h = tau / 1000.0;
    const std::vector<double> reference = oracle.solve(1.0, 0.2, t_end);

    auto error_at = [&](int m) {
        SimConfig c;
        c.domain = Domain1D(pi / 2.0);  // lambda_1 = 4
        c.modes = 1;
        c.kernel = KernelSpec::validate(1.0, 3.0);
        c.mu1 = 0.1;
        c.mu2 = 0.4;
        c.tau = tau;
        c.steps_per_delay = m;
        c.t_end = t_end;
        c.u0 = {1.0};
        c.u1 = {0.2};
        c.f0 = {0.2};
        const Trace tr = run(c);
        const int stride = 1000 / m;
        double err = 0.0;
        for (std::size_t i = 0; i < tr.samples.size(); ++i) {
            err = std::max(err, std::abs(tr.samples[i].state.gamma[0] - reference[i * static_cast<std::size_t>(stride)]));
        }
        return err;
    };
    const double e1 = error_at(50);
    const double e2 = error_at(100);
    const double e3 = error_at(200);
    INFO("errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 <= 1e-3);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
    CHECK(e2 / e3 >= 3.5);
    CHECK(e2 / e3 <= 4.5);
}

TEST_CASE("self-convergence of the full delayed viscoelastic mode", "[simulate]") {
    SimConfig c;
    c.modes = 1;
    c.kernel = KernelSpec::validate(1.0, 3.0);
    c.mu2 = 0.05;
    c.tau = 0.5;
    c.t_end = 10.0;
    c.u0 = {1.0};
    c.u1 = {0.0};
    c.f0 = {0.0};
    c.steps_per_delay = 50;
    const double a = final_gamma(c);
    c.steps_per_delay = 100;
    const double b = final_gamma(c);
    c.steps_per_delay = 200;
    const double d = final_gamma(c);
    const double ratio = std::abs(a - b) / std::abs(b - d);
    INFO("ratio " << ratio);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("overflow guard raises Blowup with the partial trace", "[simulate]") {
    SimConfig c = single_mode(1.0, 0.0);
    c.mu1 = -3.0;
    c.tau = 0.5;
    c.steps_per_delay = 50;
    c.t_end = 30.0;
    c.overflow_guard = 1e6;
    try {
        (void)run(c);
        FAIL("expected Blowup");
    } catch (const Blowup& b) {
        CHECK(b.code() == Errc::Blowup);
        CHECK(b.time() > 0.0);
        CHECK(b.time() < 30.0);
        REQUIRE_FALSE(b.partial().samples.empty());
        const double last = b.partial().samples.back().state.t;
        CHECK(last < b.time());
        CHECK(last >= b.time() - 2.0 * c.dt() - 1e-12);
        for (const Snapshot& s : b.partial().samples) CHECK(std::isfinite(s.state.gamma[0]));
    }
}

namespace {

SimConfig random_config(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    SimConfig c;
    c.domain = Domain1D(1.0 + 3.0 * unit(rng));
    c.modes = 1 + static_cast<int>(6 * unit(rng));
    if (unit(rng) < 0.7) {
        const double beta = 0.5 + 4.0 * unit(rng);
        c.kernel = KernelSpec::validate(beta * (0.1 + 0.8 * unit(rng)), beta);
    }
    c.mu1 = unit(rng) - 0.3;
    c.mu2 = 2.0 * unit(rng) - 1.0;
    c.tau = 0.1 + unit(rng);
    c.steps_per_delay = 2 + static_cast<int>(40 * unit(rng));
    c.t_end = 3.0;
    const auto n = static_cast<std::size_t>(c.modes);
    c.u0.resize(n);
    c.u1.resize(n);
    c.f0.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        c.u0[j] = normal(rng);
        c.u1[j] = normal(rng);
        c.f0[j] = normal(rng);
    }
    return c;
}

}  // namespace

TEST_CASE("linearity in the data", "[simulate][property]") {
    std::mt19937 rng(1234u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        SimConfig c = random_config(rng);
        const double scale = 0.1 + 5.0 * unit(rng);
        SimConfig s = c;
        for (auto* v : {&s.u0, &s.u1, &s.f0}) {
            for (double& x : *v) x *= scale;
        }
        const Trace a = run(c);
        const Trace b = run(s);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            const double norm = std::max(1e-300, a.samples[i].state.max_abs_gamma());
            for (std::size_t j = 0; j < a.samples[i].state.modes(); ++j) {
                REQUIRE(std::abs(scale * a.samples[i].state.gamma[j] - b.samples[i].state.gamma[j]) <=
                        1e-12 * scale * std::max(1.0, norm));
            }
        }
    }
}

TEST_CASE("modal decoupling", "[simulate][property]") {
    std::mt19937 rng(4321u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        SimConfig c = random_config(rng);
        const auto k = static_cast<std::size_t>(unit(rng) * c.modes);
        c.u0[k] = c.u1[k] = c.f0[k] = 0.0;
        const Trace tr = run(c);
        for (const Snapshot& s : tr.samples) {
            REQUIRE(s.state.gamma[k] == 0.0);
            REQUIRE(s.state.v[k] == 0.0);
            REQUIRE(s.state.M[k] == 0.0);
        }
    }
}

TEST_CASE("repeated runs are bitwise identical", "[simulate][property]") {
    std::mt19937 rng(77u);
    for (int trial = 0; trial < 10; ++trial) {
        const SimConfig c = random_config(rng);
        const Trace a = run(c);
        const Trace b = run(c);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            REQUIRE(a.samples[i].state.gamma == b.samples[i].state.gamma);
            REQUIRE(a.samples[i].state.v == b.samples[i].state.v);
        }
    }
}
