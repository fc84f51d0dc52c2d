#pragma once

#include <optional>
#include <string>
#include <vector>

#include "viscowave/analysis.hpp"
#include "viscowave/config.hpp"
#include "viscowave/diagnostics.hpp"
#include "viscowave/simulate.hpp"

namespace viscowave {

/// Lyapunov weights for a scenario: the parameter chain closed at |mu2|
/// when a kernel is present, zeros otherwise, then any explicit overrides.
struct ResolvedWeights {
    LyapunovWeights weights;
    std::optional<LyapunovParams> params;
    std::string note;  // why the chain was skipped, if it was
};

[[nodiscard]] inline ResolvedWeights resolve_weights(const Scenario& sc) {
    ResolvedWeights out;
    const SimConfig& sim = sc.sim;
    if (sim.kernel.present()) {
        try {
            out.params = select_params(sim.kernel, sim.domain, sim.tau, sc.lyapunov_t0, std::abs(sim.mu2));
            out.weights = out.params->weights();
        } catch (const Error& e) {
            out.note = e.detail();
        }
    } else {
        out.note = "no memory kernel";
    }
    if (sc.xi) out.weights.xi = *sc.xi;
    if (sc.sigma) out.weights.sigma = *sc.sigma;
    if (sc.eps1) out.weights.eps1 = *sc.eps1;
    if (sc.eps2) out.weights.eps2 = *sc.eps2;
    return out;
}

/// One simulated scenario with its energy series, decay fit and class.
struct Evaluation {
    ResolvedWeights resolved;
    Trace trace;
    std::vector<EnergySample> energy;
    std::optional<double> blowup_time;
    std::optional<DecayFit> fit;  // of E_script on the scenario's fit window
    std::string fit_error;
    Outcome outcome = Outcome::Decaying;
};

[[nodiscard]] inline Evaluation evaluate(const Scenario& sc) {
    Evaluation ev;
    ev.resolved = resolve_weights(sc);
    const LyapunovWeights& w = ev.resolved.weights;
    try {
        ev.trace = run(sc.sim, w.sigma);
    } catch (Blowup& b) {
        ev.blowup_time = b.time();
        ev.trace = std::move(b.partial());
    }
    ev.energy = energy_series(ev.trace, w);
    if (!ev.blowup_time) {
        std::vector<double> ts;
        std::vector<double> es;
        ts.reserve(ev.energy.size());
        es.reserve(ev.energy.size());
        for (const EnergySample& s : ev.energy) {
            ts.push_back(s.t);
            es.push_back(s.E_script);
        }
        try {
            ev.fit = fit_decay(ts, es, sc.fit_window_start(), sc.fit_window_end());
        } catch (const Error& e) {
            ev.fit_error = e.detail();
        }
    }
    ev.outcome = classify(ev.blowup_time.has_value(), ev.fit);
    return ev;
}

}  // namespace viscowave
