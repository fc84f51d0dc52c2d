#pragma once

#include <cmath>

#include "viscowave/errors.hpp"

namespace viscowave {

/// Exponential relaxation kernel g(t) = alpha * exp(-beta * t).
///
/// A present kernel satisfies g(0) = alpha > 0 and has total mass
/// alpha / beta = 1 - l < 1. The decay condition g' <= -zeta g then holds
/// with equality for zeta = beta. The absent variant (g == 0) switches the
/// memory term off without special-casing the solver.
class KernelSpec {
public:
    KernelSpec() = default;  // absent

    [[nodiscard]] static KernelSpec none() noexcept { return {}; }

    [[nodiscard]] static KernelSpec validate(double alpha, double beta) {
        if (!(alpha > 0.0)) {
            throw Error(Errc::NonPositiveMass, "kernel amplitude alpha must be > 0");
        }
        if (!(beta > 0.0)) {
            throw Error(Errc::NonPositiveRate, "kernel rate beta must be > 0");
        }
        if (!(alpha < beta)) {
            throw Error(Errc::MassExceedsOne,
                        "kernel mass alpha/beta must be < 1 (residual elasticity l = 1 - alpha/beta > 0)");
        }
        KernelSpec k;
        k.present_ = true;
        k.alpha_ = alpha;
        k.beta_ = beta;
        return k;
    }

    [[nodiscard]] bool present() const noexcept { return present_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    /// Residual elasticity l = 1 - int_0^inf g. Equals 1 for the absent kernel.
    [[nodiscard]] double l() const noexcept { return present_ ? 1.0 - alpha_ / beta_ : 1.0; }
    [[nodiscard]] double zeta() const noexcept { return beta_; }
    [[nodiscard]] double total_mass() const noexcept { return present_ ? alpha_ / beta_ : 0.0; }

    [[nodiscard]] double operator()(double t) const noexcept {
        return present_ ? alpha_ * std::exp(-beta_ * t) : 0.0;
    }
    [[nodiscard]] double derivative(double t) const noexcept { return -beta_ * (*this)(t); }

    /// G(t) = int_0^t g(s) ds in closed form.
    [[nodiscard]] double mass_up_to(double t) const noexcept {
        return present_ ? alpha_ * -std::expm1(-beta_ * t) / beta_ : 0.0;
    }

private:
    bool present_ = false;
    double alpha_ = 0.0;
    double beta_ = 0.0;
};

/// g0 = int_0^{t0} g(s) ds, the lower bound on the kernel mass for t >= t0.
[[nodiscard]] inline double g0_up_to(const KernelSpec& spec, double t0) {
    if (!(t0 > 0.0)) {
        throw Error(Errc::NonPositiveT0, "t0 must be > 0");
    }
    return spec.mass_up_to(t0);
}

/// One step of the exact-weight trapezoid recurrence for
/// M(t) = int_0^t g(t - s) y(s) ds on a uniform grid of spacing dt.
///
/// Iterating from M(0) = 0 reproduces the composite trapezoid rule over the
/// whole stored trajectory term by term, since the weight of every older
/// sample picks up exactly one factor exp(-beta dt) per step.
class MemoryRecurrence {
public:
    MemoryRecurrence() = default;
    MemoryRecurrence(const KernelSpec& spec, double dt)
        : decay_(std::exp(-spec.beta() * dt)), half_weight_(0.5 * dt * spec.alpha()) {}

    [[nodiscard]] double decay() const noexcept { return decay_; }

    [[nodiscard]] double advance(double m, double y_old, double y_new) const noexcept {
        return decay_ * m + half_weight_ * (y_new + decay_ * y_old);
    }

    /// Same as advance() with the increment scaled; a fault-injection hook
    /// for exercising the invariant checker. scale == 1 is the true update.
    [[nodiscard]] double advance_scaled(double m, double y_old, double y_new,
                                        double scale) const noexcept {
        return decay_ * m + scale * half_weight_ * (y_new + decay_ * y_old);
    }

private:
    double decay_ = 1.0;
    double half_weight_ = 0.0;
};

[[nodiscard]] inline double advance_memory(double m, double y_old, double y_new, double dt,
                                           const KernelSpec& spec) {
    return MemoryRecurrence(spec, dt).advance(m, y_old, y_new);
}

}  // namespace viscowave
