#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viscowave/diagnostics.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/simulate.hpp"
#include "viscowave/spectral.hpp"

namespace viscowave {

/// Explicit closure of the generic estimate constants C1..C7.
///
/// delta1 = l/4 puts the grad-u coefficient of Psi' at -l/2. With C* the
/// Poincare constant and mu the feedback magnitude:
///   C1 = max(1, mu^2 C*^2 / l)        Young on -mu (u, u_t(t-tau))
///   C2 = (1-l) C*^2 / l               memory term of Psi', delta1 = l/4
///   C3 = (1-l) / 4                    Cauchy-Schwarz with int g <= 1-l
///   C4 = g(0) C*^2 / 4                Cauchy-Schwarz with int -g' <= g(0)
///   C5 = mu^2 (1-l) C*^2 / 4          Young + memory lemma on the delay term
///   C6 = C3 + C5 + (1-l)^2 / 4        also absorbs the squared-memory term of chi'
///   C7 = C4
struct EstimateConstants {
    double delta1 = 0.0;
    std::array<double, 7> C{};

    [[nodiscard]] double operator[](int i) const { return C.at(static_cast<std::size_t>(i - 1)); }
};

inline constexpr const char* kClosureFormulas[] = {
    "delta1 = l/4",
    "C1 = max(1, mu^2 C*^2 / l)",
    "C2 = (1-l) C*^2 / l",
    "C3 = (1-l)/4",
    "C4 = g(0) C*^2 / 4",
    "C5 = mu^2 (1-l) C*^2 / 4",
    "C6 = C3 + C5 + (1-l)^2/4",
    "C7 = C4",
};

[[nodiscard]] inline EstimateConstants derive_constants(const KernelSpec& kernel, const Domain1D& domain,
                                                        double mu) noexcept {
    const double l = kernel.l();
    const double c2 = domain.poincare() * domain.poincare();
    const double mu2 = mu * mu;
    EstimateConstants k;
    k.delta1 = l / 4.0;
    k.C[0] = std::max(1.0, mu2 * c2 / l);
    k.C[1] = (1.0 - l) * c2 / l;
    k.C[2] = (1.0 - l) / 4.0;
    k.C[3] = kernel(0.0) * c2 / 4.0;
    k.C[4] = mu2 * (1.0 - l) * c2 / 4.0;
    k.C[5] = k.C[2] + k.C[4] + (1.0 - l) * (1.0 - l) / 4.0;
    k.C[6] = k.C[3];
    return k;
}

struct LyapunovParams {
    EstimateConstants constants;
    double mu = 0.0;  // trial feedback magnitude the constants were closed with
    double t0 = 0.0;
    double g0 = 0.0;
    double l = 1.0;
    double tau = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double sigma = 0.0;
    double xi = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double a = 0.0;

    [[nodiscard]] LyapunovWeights weights() const noexcept { return {xi, sigma, eps1, eps2}; }
};

/// One inequality of the negativity system for L', both sides evaluated.
/// Every row reads lhs < rhs.
struct InequalityRow {
    std::string label;
    std::string expression;
    double lhs = 0.0;
    double rhs = 0.0;

    [[nodiscard]] bool satisfied() const noexcept { return lhs < rhs; }
};

/// Substitutes the parameters and a feedback magnitude |mu| into the four
/// conditions that make every coefficient of the L' estimate negative.
[[nodiscard]] inline std::array<InequalityRow, 4> evaluate_system(const LyapunovParams& p, double mu) {
    const double m = std::abs(mu);
    const double C1 = p.constants[1];
    const double C7 = p.constants[7];
    return {{
        {"ut_coefficient", "|mu|/2 + xi/2 + eps1 C1 + eps2 delta2 < eps2 g0",
         0.5 * m + 0.5 * p.xi + p.eps1 * C1 + p.eps2 * p.delta2, p.eps2 * p.g0},
        {"grad_coefficient", "eps2 delta2 < eps1 l / 2", p.eps2 * p.delta2, 0.5 * p.eps1 * p.l},
        {"gprime_circ_coefficient", "eps2 C7 / delta2 < 1/2", p.eps2 * C7 / p.delta2, 0.5},
        {"delayed_ut_coefficient", "eps1 C1 + eps2 delta2 + |mu|/2 < xi / (2 e^{sigma tau})",
         p.eps1 * C1 + p.eps2 * p.delta2 + 0.5 * m, p.xi / (2.0 * std::exp(p.sigma * p.tau))},
    }};
}

/// Runs the constructive chain with every free choice pinned:
///   delta2 = min(g0/4, l g0 / (16 C1)) / 2
///   eps2   = delta2 / (4 C7)
///   eps1   = midpoint of (eps2 g0 / (8 C1), eps2 (g0 - 2 delta2) / (2 C1))
///   sigma  = ln(k1/k2) / (2 tau), so e^{sigma tau} = sqrt(k1/k2)
///   xi     = midpoint of (2 k2 e^{sigma tau}, 2 k1)
///   a      = min(2 k1 - xi, xi e^{-sigma tau} - 2 k2)
[[nodiscard]] inline LyapunovParams select_params(const KernelSpec& kernel, const Domain1D& domain, double tau,
                                                  double t0, double mu) {
    if (!kernel.present()) {
        throw Error(Errc::InfeasibleConstants, "the parameter chain needs a memory kernel (g0 > 0)");
    }
    if (!(tau > 0.0)) {
        throw Error(Errc::InvalidConfig, "tau must be > 0");
    }
    LyapunovParams p;
    p.mu = std::abs(mu);
    p.t0 = t0;
    p.tau = tau;
    p.g0 = g0_up_to(kernel, t0);
    p.l = kernel.l();
    p.constants = derive_constants(kernel, domain, p.mu);
    p.delta1 = p.constants.delta1;
    const double C1 = p.constants[1];
    const double C7 = p.constants[7];

    p.delta2 = 0.5 * std::min(p.g0 / 4.0, p.l * p.g0 / (16.0 * C1));
    p.eps2 = p.delta2 / (4.0 * C7);
    const double eps1_lo = p.eps2 * p.g0 / (8.0 * C1);
    const double eps1_hi = p.eps2 * (p.g0 - 2.0 * p.delta2) / (2.0 * C1);
    if (!(eps1_lo < eps1_hi)) {
        throw Error(Errc::InfeasibleConstants, "empty window for eps1");
    }
    p.eps1 = 0.5 * (eps1_lo + eps1_hi);
    p.k1 = p.eps2 * (p.g0 - p.delta2) - p.eps1 * C1;
    p.k2 = p.eps1 * C1 + p.eps2 * p.delta2;
    if (!(p.k2 > 0.0 && p.k1 > p.k2)) {
        throw Error(Errc::InfeasibleConstants, "k1 > k2 > 0 violated");
    }
    p.sigma = std::log(p.k1 / p.k2) / (2.0 * tau);
    const double growth = std::exp(p.sigma * tau);
    const double xi_lo = 2.0 * p.k2 * growth;
    const double xi_hi = 2.0 * p.k1;
    if (!(xi_lo < xi_hi)) {
        throw Error(Errc::InfeasibleConstants, "empty window for xi");
    }
    p.xi = 0.5 * (xi_lo + xi_hi);
    p.a = std::min(2.0 * p.k1 - p.xi, p.xi / growth - 2.0 * p.k2);
    if (!(p.a > 0.0)) {
        throw Error(Errc::InfeasibleConstants, "threshold a is not positive");
    }
    for (const InequalityRow& row : evaluate_system(p, 0.0)) {
        if (!row.satisfied()) {
            throw Error(Errc::InfeasibleConstants, "substitution check failed: " + row.expression);
        }
    }
    return p;
}

/// Largest mu with mu < a(mu). C1 grows with mu while a bounds mu, so the
/// fixed point of the self-consistency map is found by bisection on
/// [0, 2 k1(0)]. Returns 0 when no mu > 0 is self-consistent.
[[nodiscard]] inline double theoretical_threshold(const KernelSpec& kernel, const Domain1D& domain, double tau,
                                                  double t0, double tol = 1e-10) {
    auto a_of = [&](double mu) -> double {
        try {
            return select_params(kernel, domain, tau, t0, mu).a;
        } catch (const Error&) {
            return 0.0;
        }
    };
    const double a0 = a_of(0.0);
    if (!(a0 > 0.0)) return 0.0;
    double lo = 0.0;
    double hi = 2.0 * select_params(kernel, domain, tau, t0, 0.0).k1;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid < a_of(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

/// Log-linear least-squares fit of E(t) ~ K exp(-lambda (t - t_start)).
struct DecayFit {
    double lambda_est = 0.0;
    double K_est = 0.0;
    double r2 = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t samples = 0;

    [[nodiscard]] double envelope(double t) const noexcept { return K_est * std::exp(-lambda_est * (t - t_start)); }
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Fits samples with t in [t_start, t_end]. A zero-variance log series is
/// reported as lambda = 0 with r2 = 1.
[[nodiscard]] inline DecayFit fit_decay(std::span<const double> t, std::span<const double> energy, double t_start,
                                        double t_end) {
    if (t.size() != energy.size()) {
        throw Error(Errc::LengthMismatch, "time and energy series differ in length");
    }
    const double slack = 1e-9 * std::max(1.0, std::abs(t_end));
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_start - slack || t[i] > t_end + slack) continue;
        if (!(energy[i] > 0.0)) {
            throw Error(Errc::NonPositiveEnergy, "energy must be positive on the fit window");
        }
        xs.push_back(t[i]);
        ys.push_back(std::log(energy[i]));
    }
    if (xs.size() < kMinFitSamples) {
        throw Error(Errc::WindowTooShort, "fit window holds fewer than 10 samples");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit fit;
    fit.t_start = t_start;
    fit.t_end = t_end;
    fit.samples = xs.size();
    const double noise = 1e-14 * std::max(1.0, std::abs(my));
    double slope = 0.0;
    if (syy <= n * noise * noise) {
        fit.r2 = 1.0;
    } else {
        slope = sxy / sxx;
        fit.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    }
    fit.lambda_est = -slope;
    fit.K_est = std::exp(my + slope * (t_start - mx));
    return fit;
}

enum class Outcome { Decaying, Growing };

[[nodiscard]] constexpr const char* to_string(Outcome o) noexcept {
    return o == Outcome::Decaying ? "decaying" : "growing";
}

/// growing <=> blow-up, or a confident (r2 >= 0.9) negative fitted rate.
[[nodiscard]] inline Outcome classify(bool blowup, const std::optional<DecayFit>& fit) noexcept {
    if (blowup) return Outcome::Growing;
    if (fit && fit->lambda_est < 0.0 && fit->r2 >= 0.9) return Outcome::Growing;
    return Outcome::Decaying;
}

struct Probe {
    double mu = 0.0;
    Outcome outcome = Outcome::Decaying;
    double lambda_est = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> blowup_time;
};

struct EmpiricalThreshold {
    double mu_star = 0.0;
    std::vector<Probe> probes;  // in evaluation order
};

/// Bisection on one feedback parameter between two differently classified
/// endpoints. `probe` runs one simulation at the given parameter value.
[[nodiscard]] inline EmpiricalThreshold empirical_threshold(const std::function<Probe(double)>& probe, double lo,
                                                            double hi, double tol = 1e-3) {
    EmpiricalThreshold out;
    Probe p_lo = probe(lo);
    Probe p_hi = probe(hi);
    out.probes.push_back(p_lo);
    out.probes.push_back(p_hi);
    if (p_lo.outcome == p_hi.outcome) {
        throw Error(Errc::SameClassAtEndpoints,
                    std::string("both bracket endpoints classify as ") + to_string(p_lo.outcome));
    }
    const Outcome lo_class = p_lo.outcome;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        Probe p = probe(mid);
        out.probes.push_back(p);
        if (p.outcome == lo_class) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.mu_star = 0.5 * (lo + hi);
    return out;
}

/// Probe built from a simulation config: runs it, fits the energy with
/// memory on [t_start, t_end] and classifies.
[[nodiscard]] inline Probe probe_config(const SimConfig& config, double fit_start, double fit_end, double mu) {
    Probe p;
    p.mu = mu;
    std::optional<DecayFit> fit;
    bool blowup = false;
    try {
        const Trace trace = run(config);
        std::vector<double> ts;
        std::vector<double> es;
        for (const Snapshot& s : trace.samples) {
            ts.push_back(s.state.t);
            es.push_back(script_energy(s.state, trace.lambdas));
        }
        fit = fit_decay(ts, es, fit_start, fit_end);
        p.lambda_est = fit->lambda_est;
        p.r2 = fit->r2;
    } catch (const Blowup& b) {
        blowup = true;
        p.blowup_time = b.time();
    }
    p.outcome = classify(blowup, fit);
    return p;
}

}  // namespace viscowave
