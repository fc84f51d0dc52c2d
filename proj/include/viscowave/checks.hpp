#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "viscowave/config.hpp"
#include "viscowave/diagnostics.hpp"
#include "viscowave/pipeline.hpp"

namespace viscowave {

inline constexpr double kInvariantSlack = 1e-10;
inline constexpr double kConservationTolerance = 1e-4;

/// One runtime invariant; worst_margin >= 0 means it held everywhere.
struct InvariantResult {
    std::string name;
    double worst_margin = 0.0;
    bool applicable = true;
    bool pass = true;
    std::string detail;
};

/// Runs the scenario (and once more at half the step for the identity
/// residual) and evaluates the invariant suite on every sample.
[[nodiscard]] inline std::vector<InvariantResult> check_invariants(const Scenario& sc) {
    std::vector<InvariantResult> out;
    const Evaluation ev = evaluate(sc);
    const SimConfig& sim = sc.sim;
    const LyapunovWeights& w = ev.resolved.weights;
    const Trace& trace = ev.trace;
    const double inf = std::numeric_limits<double>::infinity();

    auto add = [&](std::string name, double margin, std::string detail = {}) {
        InvariantResult r;
        r.name = std::move(name);
        r.worst_margin = margin;
        r.pass = margin >= -kInvariantSlack;
        r.detail = std::move(detail);
        out.push_back(std::move(r));
    };
    auto skip = [&](std::string name, std::string why) {
        InvariantResult r;
        r.name = std::move(name);
        r.worst_margin = inf;
        r.applicable = false;
        r.detail = std::move(why);
        out.push_back(std::move(r));
    };

    if (ev.blowup_time) {
        add("no_blowup", -inf, "overflow guard hit at t = " + format_double(*ev.blowup_time));
    }

    double lemma = inf;
    double gcirc = inf;
    double gprime = inf;
    for (const Snapshot& s : trace.samples) {
        lemma = std::min(lemma, memory_bound_margin(s.state, sim.kernel, sim.domain, trace.lambdas));
        const double gc = g_circ_grad(s.state, trace.lambdas);
        gcirc = std::min(gcirc, gc);
        gprime = std::min(gprime, sim.kernel.beta() * gc);
    }
    add("memory_bound", lemma);
    add("g_circ_nonnegative", gcirc);
    add("gprime_circ_nonpositive", gprime);

    const PriorBound pb = prior_bound(sim, trace);
    add("prior_bound", pb.worst_margin / std::max(1.0, pb.bound), "bound = " + format_double(pb.bound));

    // The centred velocity conserves e(t) only up to O(dt^2), so
    // monotonicity is asserted under strict viscous damping and plain
    // conservation is checked to a drift tolerance.
    if (sim.mu2 == 0.0 && sim.mu1 > 0.0) {
        double worst = inf;
        for (std::size_t i = 1; i < ev.energy.size(); ++i) {
            const double scale = std::max(1.0, ev.energy[i - 1].E_script);
            worst = std::min(worst, (ev.energy[i - 1].E_script - ev.energy[i].E_script) / scale);
        }
        add("energy_nonincreasing", worst);
    } else {
        skip("energy_nonincreasing", "needs mu2 = 0 and mu1 > 0");
    }
    if (sim.mu1 == 0.0 && sim.mu2 == 0.0 && !sim.kernel.present() && !ev.energy.empty()) {
        const double e0 = ev.energy.front().e;
        double drift = 0.0;
        for (const EnergySample& s : ev.energy) drift = std::max(drift, std::abs(s.e - e0) / std::max(e0, 1e-300));
        add("energy_conserved", kConservationTolerance - drift, "max relative drift = " + format_double(drift));
    } else {
        skip("energy_conserved", "needs mu1 = mu2 = 0 and no kernel");
    }

    if (!ev.blowup_time && trace.samples.size() >= 2) {
        SimConfig fine = sim;
        fine.steps_per_delay *= 2;
        fine.sample_every = 1;
        SimConfig coarse = sim;
        coarse.sample_every = 1;
        try {
            const double r1 = max_abs(energy_identity_residual(run(coarse, w.sigma), coarse, w.xi, w.sigma));
            const double r2 = max_abs(energy_identity_residual(run(fine, w.sigma), fine, w.xi, w.sigma));
            const bool negligible = r1 < 1e-12;
            const double ratio = r2 > 0.0 ? r1 / r2 : inf;
            add("identity_convergence", negligible ? inf : ratio - 2.0,
                "residual " + format_double(r1) + " -> " + format_double(r2) + " under dt/2");
        } catch (const Blowup&) {
            add("identity_convergence", -inf, "refined run blew up");
        }
    } else {
        skip("identity_convergence", "needs a complete trace");
    }

    if (w.eps1 > 0.0 || w.eps2 > 0.0) {
        const Equivalence eq = equivalence_constants(w, sim.kernel, sim.domain);
        double worst = inf;
        for (const EnergySample& s : ev.energy) {
            const double scale = std::max(1e-300, s.E_mod);
            worst = std::min(worst, std::min(s.L - eq.beta1 * s.E_mod, eq.beta2 * s.E_mod - s.L) / scale);
        }
        add("lyapunov_equivalence", worst,
            "beta1 = " + format_double(eq.beta1) + ", beta2 = " + format_double(eq.beta2));
    } else {
        skip("lyapunov_equivalence", "no Lyapunov weights");
    }
    return out;
}

}  // namespace viscowave
