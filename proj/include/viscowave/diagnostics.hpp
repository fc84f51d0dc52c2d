#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "viscowave/kernel.hpp"
#include "viscowave/simulate.hpp"
#include "viscowave/spectral.hpp"

namespace viscowave {

// All spatial integrals below are modal sums: (w_j, w_k) = delta_jk and
// (w_j', w_k') = lambda_j delta_jk turn every L^2 norm into a weighted
// sum of squares.

/// Weights of the modified energy and the Lyapunov functional.
struct LyapunovWeights {
    double xi = 0.0;
    double sigma = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
};

struct EnergySample {
    double t = 0.0;
    double e = 0.0;         // classical energy
    double E_script = 0.0;  // energy with memory, no delay term
    double E_mod = 0.0;     // modified energy
    double g_circ = 0.0;
    double Psi = 0.0;
    double Chi = 0.0;
    double L = 0.0;
    double delay_int = 0.0;
    double max_abs_gamma = 0.0;
};

namespace detail {
[[nodiscard]] inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
[[nodiscard]] inline double weighted_sq(std::span<const double> w, std::span<const double> a) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * a[i];
    return s;
}
}  // namespace detail

/// e = (||u_t||^2 + ||grad u||^2) / 2.
[[nodiscard]] inline double classical_energy(std::span<const double> gamma, std::span<const double> v,
                                             std::span<const double> lambdas) noexcept {
    return 0.5 * (detail::dot(v, v) + detail::weighted_sq(lambdas, gamma));
}

[[nodiscard]] inline double classical_energy(const ModalState& s, std::span<const double> lambdas) noexcept {
    return classical_energy(s.gamma, s.v, lambdas);
}

/// (g o grad u)(t) = sum_j lambda_j (gamma_j^2 G - 2 gamma_j M_j + Q_j).
[[nodiscard]] inline double g_circ_grad(const ModalState& s, std::span<const double> lambdas) noexcept {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.modes(); ++j) {
        const double g = s.gamma[j];
        sum += lambdas[j] * (g * g * s.G - 2.0 * g * s.M[j] + s.Q[j]);
    }
    return sum;
}

/// Energy with memory and no delay weight:
/// (||u_t||^2 + (1 - G)||grad u||^2 + (g o grad u)) / 2.
[[nodiscard]] inline double script_energy(const ModalState& s, std::span<const double> lambdas) noexcept {
    return 0.5 * (detail::dot(s.v, s.v) + (1.0 - s.G) * detail::weighted_sq(lambdas, s.gamma) +
                  g_circ_grad(s, lambdas));
}

[[nodiscard]] inline double modified_energy(const ModalState& s, double delay_int, std::span<const double> lambdas,
                                            double xi) noexcept {
    return script_energy(s, lambdas) + 0.5 * xi * delay_int;
}

/// Modified energy with the delay tail taken from the history buffer.
/// xi = 0 reproduces script_energy.
[[nodiscard]] inline double modified_energy(const ModalState& s, const HistoryBuffer& history, double dt,
                                            std::span<const double> lambdas, double xi, double sigma) {
    if (!history.filled()) {
        throw Error(Errc::HistoryUnderfilled, "history does not cover [t - tau, t]");
    }
    return modified_energy(s, delay_integral(history, dt, sigma), lambdas, xi);
}

/// Psi = (u, u_t).
[[nodiscard]] inline double psi_functional(const ModalState& s) noexcept { return detail::dot(s.gamma, s.v); }

/// chi = -(u_t, int_0^t g(t-s)(u(t) - u(s)) ds) = -sum_j v_j (gamma_j G - M_j).
[[nodiscard]] inline double chi_functional(const ModalState& s) noexcept {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.modes(); ++j) sum += s.v[j] * (s.gamma[j] * s.G - s.M[j]);
    return -sum;
}

[[nodiscard]] inline double lyapunov(const ModalState& s, double delay_int, std::span<const double> lambdas,
                                     const LyapunovWeights& w) noexcept {
    return modified_energy(s, delay_int, lambdas, w.xi) + w.eps1 * psi_functional(s) +
           w.eps2 * chi_functional(s);
}

[[nodiscard]] inline EnergySample sample_energy(const Snapshot& snap, std::span<const double> lambdas,
                                                const LyapunovWeights& w) noexcept {
    const ModalState& s = snap.state;
    EnergySample out;
    out.t = s.t;
    out.e = classical_energy(s, lambdas);
    out.g_circ = g_circ_grad(s, lambdas);
    out.E_script = script_energy(s, lambdas);
    out.E_mod = out.E_script + 0.5 * w.xi * snap.delay_int;
    out.Psi = psi_functional(s);
    out.Chi = chi_functional(s);
    out.L = out.E_mod + w.eps1 * out.Psi + w.eps2 * out.Chi;
    out.delay_int = snap.delay_int;
    out.max_abs_gamma = s.max_abs_gamma();
    return out;
}

/// Samples the trace. The trace's stored delay integral must have been
/// taken with the same sigma as w.sigma.
[[nodiscard]] inline std::vector<EnergySample> energy_series(const Trace& trace, const LyapunovWeights& w) {
    std::vector<EnergySample> out;
    out.reserve(trace.samples.size());
    for (const Snapshot& s : trace.samples) out.push_back(sample_energy(s, trace.lambdas, w));
    return out;
}

/// Right-hand side of the energy identity for the modified energy:
///   E' = (g' o grad u)/2 - g(t)||grad u||^2/2 - mu1 ||u_t||^2 - mu2 (u_t, u_t(t-tau))
///        + xi/2 ||u_t||^2 - xi/2 e^{-sigma tau} ||u_t(t-tau)||^2 - sigma xi/2 delay_int.
/// For the exponential kernel (g' o grad u) = -beta (g o grad u).
[[nodiscard]] inline double energy_rate(const Snapshot& snap, std::span<const double> lambdas,
                                        const KernelSpec& kernel, double mu1, double mu2, double tau, double xi,
                                        double sigma) noexcept {
    const ModalState& s = snap.state;
    const double vv = detail::dot(s.v, s.v);
    const double vd = detail::dot(s.v, snap.v_delayed);
    const double dd = detail::dot(snap.v_delayed, snap.v_delayed);
    const double grad = detail::weighted_sq(lambdas, s.gamma);
    const double gc = g_circ_grad(s, lambdas);
    return 0.5 * (-kernel.beta() * gc) - 0.5 * kernel(s.t) * grad - mu1 * vv - mu2 * vd + 0.5 * xi * vv -
           0.5 * xi * std::exp(-sigma * tau) * dd - 0.5 * sigma * xi * snap.delay_int;
}

/// Residual of the energy identity between consecutive samples:
///   r_{n+1/2} = (E_{n+1} - E_n) / dt - (RHS_n + RHS_{n+1}) / 2,
/// a difference quotient centred at the half step. Breaking points of the
/// delay equation (multiples of tau) sit on grid nodes, so every interval is
/// smooth and the residual is O(dt^2).
[[nodiscard]] inline std::vector<double> energy_identity_residual(const Trace& trace, const SimConfig& config,
                                                                  double xi, double sigma) {
    std::vector<double> r;
    if (trace.samples.size() < 2) return r;
    std::vector<double> energy;
    std::vector<double> rate;
    energy.reserve(trace.samples.size());
    rate.reserve(trace.samples.size());
    for (const Snapshot& s : trace.samples) {
        energy.push_back(modified_energy(s.state, s.delay_int, trace.lambdas, xi));
        rate.push_back(energy_rate(s, trace.lambdas, config.kernel, config.mu1, config.mu2, config.tau, xi, sigma));
    }
    r.reserve(energy.size() - 1);
    for (std::size_t i = 0; i + 1 < energy.size(); ++i) {
        const double h = trace.samples[i + 1].state.t - trace.samples[i].state.t;
        r.push_back((energy[i + 1] - energy[i]) / h - 0.5 * (rate[i] + rate[i + 1]));
    }
    return r;
}

[[nodiscard]] inline double max_abs(std::span<const double> xs) noexcept {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

/// Margin RHS - LHS of
///   ||int_0^t g(t-s)(u(t) - u(s)) ds||^2 <= (1 - l) C*^2 (g o grad u)(t).
[[nodiscard]] inline double memory_bound_margin(const ModalState& s, const KernelSpec& kernel, const Domain1D& domain,
                                          std::span<const double> lambdas) noexcept {
    double lhs = 0.0;
    for (std::size_t j = 0; j < s.modes(); ++j) {
        const double d = s.gamma[j] * s.G - s.M[j];
        lhs += d * d;
    }
    const double c = domain.poincare();
    const double rhs = (1.0 - kernel.l()) * c * c * g_circ_grad(s, lambdas);
    return rhs - lhs;
}

struct PriorBound {
    double bound = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();  // min over samples of bound - E_script
    bool ok = true;
};

/// Gronwall envelope
///   E_script(t) <= (|mu2|/2 int_{-tau}^0 ||f0||^2 + E_script(0)) e^{2(|mu2| + |mu1|) T}.
[[nodiscard]] inline PriorBound prior_bound(const SimConfig& config, const Trace& trace) {
    PriorBound out;
    if (trace.samples.empty()) return out;
    const double e0 = script_energy(trace.samples.front().state, trace.lambdas);
    const double horizon = trace.samples.back().state.t;
    const double a1 = std::abs(config.mu1);
    const double a2 = std::abs(config.mu2);
    out.bound = (0.5 * a2 * trace.history_energy + e0) * std::exp(2.0 * (a1 + a2) * horizon);
    for (const Snapshot& s : trace.samples) {
        const double margin = out.bound - script_energy(s.state, trace.lambdas);
        out.worst_margin = std::min(out.worst_margin, margin);
    }
    out.ok = out.worst_margin >= 0.0;
    return out;
}

/// Two-sided bound beta1 E <= L <= beta2 E from Young's and Poincare's
/// inequalities and the memory lemma:
///   |eps1 Psi + eps2 chi| <= c E,  c = max(eps1 + eps2, eps1 C*^2 / l, eps2 (1-l) C*^2).
struct Equivalence {
    double beta1 = 1.0;
    double beta2 = 1.0;
};

[[nodiscard]] inline Equivalence equivalence_constants(const LyapunovWeights& w, const KernelSpec& kernel,
                                                       const Domain1D& domain) noexcept {
    const double c2 = domain.poincare() * domain.poincare();
    const double l = kernel.l();
    const double c = std::max({w.eps1 + w.eps2, w.eps1 * c2 / l, w.eps2 * (1.0 - l) * c2});
    return {1.0 - c, 1.0 + c};
}

}  // namespace viscowave
