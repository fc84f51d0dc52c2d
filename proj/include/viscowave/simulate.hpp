#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "viscowave/errors.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/spectral.hpp"

namespace viscowave {

/// Which modal equation the stepper integrates.
///
/// Convolution is the Galerkin projection of the memory term,
///   g'' + mu1 g' + mu2 g'(t - tau) + lambda g - lambda int_0^t k(t-s) g(s) ds = 0.
/// AsPrinted replaces the convolution by lambda G(t) g(t); it is kept
/// only for comparison runs.
enum class OdeForm { Convolution, AsPrinted };

struct SimConfig {
    Domain1D domain{};
    int modes = 8;
    KernelSpec kernel{};
    double mu1 = 0.0;
    double mu2 = 0.0;
    double tau = 1.0;
    int steps_per_delay = 20;  // m, dt = tau / m
    double t_end = 10.0;
    int sample_every = 1;
    // Modal coefficients of u0, u1 and of the (time-constant) history f0.
    std::vector<double> u0;
    std::vector<double> u1;
    std::vector<double> f0;
    OdeForm ode_form = OdeForm::Convolution;
    double overflow_guard = 1e12;
    // Test hook: scales every memory increment. 1 is the correct scheme.
    double memory_fault_scale = 1.0;

    [[nodiscard]] double dt() const noexcept { return tau / steps_per_delay; }

    [[nodiscard]] long long step_count() const noexcept {
        if (t_end <= 0.0) return 0;
        return static_cast<long long>(std::ceil(t_end / dt() - 1e-9));
    }

    void validate() const {
        auto fail = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
        if (modes < 1) fail("modes must be >= 1");
        if (!(tau > 0.0)) fail("tau must be > 0");
        if (steps_per_delay < 2) fail("steps per delay m must be >= 2");
        if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be >= 0");
        if (sample_every < 1) fail("sample_every must be >= 1");
        if (!std::isfinite(mu1) || !std::isfinite(mu2)) fail("mu1, mu2 must be finite");
        const auto n = static_cast<std::size_t>(modes);
        if (u0.size() != n || u1.size() != n || f0.size() != n) {
            throw Error(Errc::LengthMismatch, "initial/history coefficient vectors must have one entry per mode");
        }
    }
};

/// Per-mode state at a grid time t_n.
///
/// gamma_next holds gamma^{n+1}: the centred velocity
/// v^n = (gamma^{n+1} - gamma^{n-1}) / (2 dt) is only known once the next
/// position is, so a state is "complete" one position ahead of its time.
struct ModalState {
    double t = 0.0;
    std::vector<double> gamma;
    std::vector<double> gamma_prev;
    std::vector<double> gamma_next;
    std::vector<double> v;
    std::vector<double> M;  // int_0^t g(t-s) gamma(s) ds
    std::vector<double> Q;  // int_0^t g(t-s) gamma(s)^2 ds
    // int_0^t g(s) ds accumulated by the same recurrence as M and Q, so that
    // quadratic forms built from (G, M, Q) stay nonnegative at the discrete level.
    double G = 0.0;

    [[nodiscard]] std::size_t modes() const noexcept { return gamma.size(); }
    [[nodiscard]] double max_abs_gamma() const noexcept {
        double m = 0.0;
        for (double g : gamma) m = std::max(m, std::abs(g));
        return m;
    }
};

/// Ring buffer of the last m + 1 modal velocity vectors, at times
/// t, t - dt, ..., t - tau. lag(k) returns the velocity at t - k dt.
class HistoryBuffer {
public:
    HistoryBuffer() = default;
    HistoryBuffer(int modes, int steps_per_delay)
        : modes_(static_cast<std::size_t>(modes)),
          slots_(static_cast<std::size_t>(steps_per_delay) + 1),
          data_(modes_ * slots_, 0.0) {}

    [[nodiscard]] int steps_per_delay() const noexcept { return static_cast<int>(slots_) - 1; }
    [[nodiscard]] std::size_t modes() const noexcept { return modes_; }
    [[nodiscard]] bool filled() const noexcept { return pushed_ >= slots_; }

    void push(std::span<const double> v) {
        if (v.size() != modes_) {
            throw Error(Errc::LengthMismatch, "history push: wrong mode count");
        }
        head_ = (head_ + 1) % slots_;
        std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(head_ * modes_));
        ++pushed_;
    }

    [[nodiscard]] std::span<const double> lag(int k) const {
        if (k < 0 || static_cast<std::size_t>(k) >= slots_) {
            throw Error(Errc::BadIndex, "history lag outside [0, m]");
        }
        if (static_cast<std::size_t>(k) >= pushed_) {
            throw Error(Errc::HistoryUnderfilled, "history does not reach the requested lag");
        }
        const std::size_t slot = (head_ + slots_ - static_cast<std::size_t>(k)) % slots_;
        return {data_.data() + slot * modes_, modes_};
    }

    /// Velocity at t - tau.
    [[nodiscard]] std::span<const double> delayed() const { return lag(steps_per_delay()); }

private:
    std::size_t modes_ = 0;
    std::size_t slots_ = 1;
    std::vector<double> data_;
    std::size_t head_ = 0;
    std::size_t pushed_ = 0;
};

/// gamma'' from the modal equation; mu1 enters explicitly here, the stepper
/// treats it implicitly.
[[nodiscard]] constexpr double modal_rhs(double gamma, double memory, double velocity,
                                         double delayed_velocity, double lambda, double mu1,
                                         double mu2) noexcept {
    return -lambda * gamma + lambda * memory - mu1 * velocity - mu2 * delayed_velocity;
}

/// Snapshot of a complete state plus the history-derived quantities the
/// diagnostics need at that time.
struct Snapshot {
    ModalState state;
    std::vector<double> v_delayed;  // v(t - tau)
    double delay_int = 0.0;         // int_{t-tau}^t e^{sigma (s-t)} ||u_t(s)||^2 ds
};

struct Trace {
    std::vector<Snapshot> samples;
    std::vector<double> lambdas;
    double dt = 0.0;
    int steps_per_delay = 0;
    double sigma = 0.0;
    // int_{-tau}^0 ||f0(s)||^2 ds, the history part of the a-priori bound.
    double history_energy = 0.0;
};

/// Thrown when a coefficient leaves the overflow guard; carries everything
/// sampled before the first overflow.
class Blowup : public Error {
public:
    Blowup(double time, Trace partial)
        : Error(Errc::Blowup, "coefficient exceeded overflow guard at t = " + std::to_string(time)),
          time_(time), partial_(std::move(partial)) {}

    [[nodiscard]] double time() const noexcept { return time_; }
    [[nodiscard]] const Trace& partial() const noexcept { return partial_; }
    [[nodiscard]] Trace& partial() noexcept { return partial_; }

private:
    double time_;
    Trace partial_;
};

/// Trapezoid rule over the m + 1 history slots of e^{-sigma k dt} ||v(t - k dt)||^2.
[[nodiscard]] inline double delay_integral(const HistoryBuffer& history, double dt, double sigma) {
    const int m = history.steps_per_delay();
    double sum = 0.0;
    for (int k = 0; k <= m; ++k) {
        double vv = 0.0;
        for (double v : history.lag(k)) vv += v * v;
        const double w = (k == 0 || k == m) ? 0.5 : 1.0;
        sum += w * std::exp(-sigma * k * dt) * vv;
    }
    return dt * sum;
}

/// Central-difference integrator for the modal delay integro-differential
/// system. dt = tau / m so the delayed velocity is always a stored slot.
///
///   (1 + mu1 dt/2) g^{n+1} = 2 g^n - (1 - mu1 dt/2) g^{n-1}
///                            + dt^2 (-lambda g^n + lambda M^n - mu2 v^{n-m})
///
/// The start uses the Taylor step g^1 = g^0 + dt v^0 + dt^2/2 a^0, and the
/// fictitious g^{-1} is its reflection so that the centred v^0 equals u1.
class Simulator {
public:
    explicit Simulator(SimConfig config) : cfg_(std::move(config)), modes_(cfg_.domain, cfg_.modes) {
        cfg_.validate();
        dt_ = cfg_.dt();
        memory_ = MemoryRecurrence(cfg_.kernel, dt_);
        lambdas_.assign(modes_.lambdas().begin(), modes_.lambdas().end());

        const auto n = static_cast<std::size_t>(cfg_.modes);
        const int m = cfg_.steps_per_delay;
        history_ = HistoryBuffer(cfg_.modes, m);
        // Prehistory on s = -tau, ..., -dt; the slot at s = 0 is u1.
        for (int k = 0; k < m; ++k) history_.push(cfg_.f0);
        history_.push(cfg_.u1);

        state_.t = 0.0;
        state_.gamma = cfg_.u0;
        state_.v = cfg_.u1;
        state_.M.assign(n, 0.0);
        state_.Q.assign(n, 0.0);
        state_.G = 0.0;
        state_.gamma_next.resize(n);
        state_.gamma_prev.resize(n);
        const auto delayed = history_.delayed();
        for (std::size_t j = 0; j < n; ++j) {
            const double a0 = acceleration(j, state_.gamma[j], 0.0, delayed[j]) - cfg_.mu1 * state_.v[j];
            const double drift = 0.5 * dt_ * dt_ * a0;
            state_.gamma_next[j] = state_.gamma[j] + dt_ * state_.v[j] + drift;
            state_.gamma_prev[j] = state_.gamma[j] - dt_ * state_.v[j] + drift;
        }
        check_guard(dt_);
    }

    [[nodiscard]] const SimConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const ModeSet& modes() const noexcept { return modes_; }
    [[nodiscard]] std::span<const double> lambdas() const noexcept { return lambdas_; }
    [[nodiscard]] const ModalState& state() const noexcept { return state_; }
    [[nodiscard]] const HistoryBuffer& history() const noexcept { return history_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }

    /// |f0 - u1| in the modal sup norm; nonzero means the history does not
    /// meet the initial velocity at s = 0.
    [[nodiscard]] double history_mismatch() const noexcept {
        double d = 0.0;
        for (std::size_t j = 0; j < cfg_.f0.size(); ++j) d = std::max(d, std::abs(cfg_.f0[j] - cfg_.u1[j]));
        return d;
    }

    /// Advances the complete state from t_n to t_{n+1}. Throws Blowup (with
    /// an empty trace) when the new position leaves the overflow guard.
    void step() {
        const std::size_t n = state_.modes();
        const double scale = cfg_.memory_fault_scale;
        for (std::size_t j = 0; j < n; ++j) {
            const double g0 = state_.gamma[j];
            const double g1 = state_.gamma_next[j];
            state_.M[j] = memory_.advance_scaled(state_.M[j], g0, g1, scale);
            state_.Q[j] = memory_.advance_scaled(state_.Q[j], g0 * g0, g1 * g1, scale);
        }
        state_.G = memory_.advance(state_.G, 1.0, 1.0);
        ++step_index_;
        state_.t = static_cast<double>(step_index_) * dt_;
        std::swap(state_.gamma_prev, state_.gamma);
        std::swap(state_.gamma, state_.gamma_next);

        const auto delayed = history_.lag(cfg_.steps_per_delay - 1);
        const double half_damp = 0.5 * cfg_.mu1 * dt_;
        const double dt2 = dt_ * dt_;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = acceleration(j, state_.gamma[j], state_.M[j], delayed[j]);
            state_.gamma_next[j] =
                (2.0 * state_.gamma[j] - (1.0 - half_damp) * state_.gamma_prev[j] + dt2 * a) / (1.0 + half_damp);
            state_.v[j] = (state_.gamma_next[j] - state_.gamma_prev[j]) / (2.0 * dt_);
        }
        history_.push(state_.v);
        check_guard(static_cast<double>(step_index_ + 1) * dt_);
    }

    [[nodiscard]] Snapshot snapshot(double sigma) const {
        Snapshot s;
        s.state = state_;
        const auto d = history_.delayed();
        s.v_delayed.assign(d.begin(), d.end());
        s.delay_int = delay_integral(history_, dt_, sigma);
        return s;
    }

private:
    // Acceleration without the mu1 term.
    [[nodiscard]] double acceleration(std::size_t j, double gamma, double memory, double delayed) const noexcept {
        const double lambda = lambdas_[j];
        if (cfg_.ode_form == OdeForm::AsPrinted) {
            return -lambda * (1.0 - state_.G) * gamma - cfg_.mu2 * delayed;
        }
        return modal_rhs(gamma, memory, 0.0, delayed, lambda, 0.0, cfg_.mu2);
    }

    void check_guard(double time) const {
        for (double g : state_.gamma_next) {
            if (!std::isfinite(g) || std::abs(g) > cfg_.overflow_guard) {
                throw Blowup(time, Trace{});
            }
        }
    }

    SimConfig cfg_;
    ModeSet modes_;
    std::vector<double> lambdas_;
    double dt_ = 0.0;
    MemoryRecurrence memory_;
    HistoryBuffer history_;
    ModalState state_;
    long long step_index_ = 0;
};

/// Integrates to t_end, sampling every `sample_every` steps plus the final
/// step. sigma weights the stored delay integral. On overflow the partial
/// trace travels inside the thrown Blowup.
[[nodiscard]] inline Trace run(const SimConfig& config, double sigma = 0.0) {
    Simulator sim(config);
    Trace trace;
    trace.lambdas.assign(sim.lambdas().begin(), sim.lambdas().end());
    trace.dt = sim.dt();
    trace.steps_per_delay = config.steps_per_delay;
    trace.sigma = sigma;
    {
        double f0sq = 0.0;
        for (double c : config.f0) f0sq += c * c;
        trace.history_energy = config.tau * f0sq;
    }

    const long long steps = config.step_count();
    trace.samples.reserve(static_cast<std::size_t>(steps / config.sample_every + 2));
    trace.samples.push_back(sim.snapshot(sigma));
    for (long long n = 1; n <= steps; ++n) {
        try {
            sim.step();
        } catch (Blowup& b) {
            throw Blowup(b.time(), std::move(trace));
        }
        if (n % config.sample_every == 0 || n == steps) {
            trace.samples.push_back(sim.snapshot(sigma));
        }
    }
    return trace;
}

}  // namespace viscowave
