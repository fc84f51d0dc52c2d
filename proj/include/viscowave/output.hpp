#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "viscowave/analysis.hpp"
#include "viscowave/config.hpp"
#include "viscowave/pipeline.hpp"

#ifndef VISCOWAVE_VERSION
#define VISCOWAVE_VERSION "0.1.0"
#endif

namespace viscowave {

inline constexpr const char* kVersion = VISCOWAVE_VERSION;

inline constexpr const char* kTraceColumns[] = {"t",     "e",      "E_script",  "E_mod",
                                                "L",     "g_circ", "delay_int", "max_abs_gamma"};

/// Leading `# key = value` lines shared by every file the tool writes.
inline void write_metadata(std::ostream& os, const Scenario& sc, const LyapunovWeights& w) {
    const SimConfig& sim = sc.sim;
    os << "# viscowave " << kVersion << "\n";
    os << "# config_hash = fnv1a64:" << sc.hash() << "\n";
    os << "# dt = " << format_double(sim.dt()) << "\n";
    os << "# m = " << sim.steps_per_delay << "\n";
    os << "# modes = " << sim.modes << "\n";
    os << "# quadrature = composite_simpson\n";
    os << "# panels = " << sc.panels << "\n";
    os << "# ode_form = " << (sim.ode_form == OdeForm::Convolution ? "convolution" : "as_printed") << "\n";
    os << "# xi = " << format_double(w.xi) << "\n";
    os << "# sigma = " << format_double(w.sigma) << "\n";
    os << "# eps1 = " << format_double(w.eps1) << "\n";
    os << "# eps2 = " << format_double(w.eps2) << "\n";
}

inline void write_trace_csv(std::ostream& os, const Scenario& sc, const Evaluation& ev) {
    write_metadata(os, sc, ev.resolved.weights);
    for (std::size_t i = 0; i < std::size(kTraceColumns); ++i) os << (i ? "," : "") << kTraceColumns[i];
    os << "\n";
    for (const EnergySample& s : ev.energy) {
        os << format_double(s.t) << ',' << format_double(s.e) << ',' << format_double(s.E_script) << ','
           << format_double(s.E_mod) << ',' << format_double(s.L) << ',' << format_double(s.g_circ) << ','
           << format_double(s.delay_int) << ',' << format_double(s.max_abs_gamma) << "\n";
    }
    if (ev.blowup_time) os << "# blowup at t = " << format_double(*ev.blowup_time) << "\n";
}

/// Columns of a trace CSV read back from disk; comment lines are skipped.
struct TraceTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    [[nodiscard]] const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return columns[i];
        }
        throw Error(Errc::InvalidConfig, "no column named '" + name + "'");
    }
};

[[nodiscard]] inline TraceTable read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidConfig, path + ": cannot open file");
    TraceTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (table.header.empty()) {
            table.header = cells;
            table.columns.resize(cells.size());
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(Errc::InvalidConfig, path + ":" + std::to_string(line_no) + ": wrong number of fields");
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                table.columns[i].push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                table.columns[i].push_back(std::nan(""));
            }
        }
    }
    if (table.header.empty()) throw Error(Errc::InvalidConfig, path + ": no header row");
    return table;
}

/// Static line chart of y against t on a log10 y axis. Nonpositive values
/// break the line.
inline void write_svg(std::ostream& os, const std::vector<double>& t, const std::vector<double>& y,
                      const std::string& label, const std::string& metadata_comment = {}) {
    constexpr double width = 720.0;
    constexpr double height = 420.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 30.0;
    constexpr double bottom = 50.0;
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    double tmin = t.empty() ? 0.0 : t.front();
    double tmax = t.empty() ? 1.0 : t.back();
    if (!(tmax > tmin)) tmax = tmin + 1.0;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (double v : y) {
        if (v > 0.0 && std::isfinite(v)) {
            lo = std::min(lo, std::log10(v));
            hi = std::max(hi, std::log10(v));
        }
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    lo = std::floor(lo);
    hi = std::max(std::ceil(hi), lo + 1.0);
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double tv) { return left + (tv - tmin) / (tmax - tmin) * pw; };
    auto py = [&](double lv) { return top + (hi - lv) / (hi - lo) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!metadata_comment.empty()) os << "<!--\n" << metadata_comment << "-->\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height) << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\""
       << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int decades = static_cast<int>(hi - lo);
    const int stride = std::max(1, decades / 8);
    for (int d = 0; d <= decades; d += stride) {
        const double yv = py(lo + d);
        os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(yv) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
           << fmt(yv) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(yv + 4) << "\" text-anchor=\"end\">1e"
           << static_cast<int>(lo) + d << "</text>\n";
    }
    for (int k = 0; k <= 5; ++k) {
        const double tv = tmin + (tmax - tmin) * k / 5.0;
        os << "<text x=\"" << fmt(px(tv)) << "\" y=\"" << fmt(top + ph + 18) << "\" text-anchor=\"middle\">"
           << format_double(std::round(tv * 1000.0) / 1000.0) << "</text>\n";
    }
    os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 10) << "\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(top - 10) << "\">" << label << " (log scale)</text>\n";

    std::string points;
    auto flush = [&] {
        if (!points.empty()) {
            os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
            points.clear();
        }
    };
    for (std::size_t i = 0; i < std::min(t.size(), y.size()); ++i) {
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
            flush();
            continue;
        }
        if (!points.empty()) points += ' ';
        points += fmt(px(t[i])) + "," + fmt(py(std::log10(y[i])));
    }
    flush();
    os << "</svg>\n";
}

/// Key-value certificate of the parameter chain, including both sides of
/// each inequality evaluated at |mu|.
inline void write_certificate(std::ostream& os, const Scenario& sc, const LyapunovParams& p, double mu,
                              double a_star) {
    write_metadata(os, sc, p.weights());
    os << "kernel.alpha = " << format_double(sc.sim.kernel.alpha()) << "\n";
    os << "kernel.beta = " << format_double(sc.sim.kernel.beta()) << "\n";
    os << "domain.length = " << format_double(sc.sim.domain.length()) << "\n";
    os << "poincare = " << format_double(sc.sim.domain.poincare()) << "\n";
    os << "tau = " << format_double(p.tau) << "\n";
    os << "t0 = " << format_double(p.t0) << "\n";
    os << "l = " << format_double(p.l) << "\n";
    os << "zeta = " << format_double(sc.sim.kernel.zeta()) << "\n";
    os << "g0 = " << format_double(p.g0) << "\n";
    os << "closure_mu = " << format_double(p.mu) << "\n";
    for (const char* f : kClosureFormulas) os << "closure: " << f << "\n";
    os << "delta1 = " << format_double(p.delta1) << "\n";
    for (int i = 1; i <= 7; ++i) os << "C" << i << " = " << format_double(p.constants[i]) << "\n";
    os << "delta2 = " << format_double(p.delta2) << "\n";
    os << "eps2 = " << format_double(p.eps2) << "\n";
    os << "eps1 = " << format_double(p.eps1) << "\n";
    os << "k1 = " << format_double(p.k1) << "\n";
    os << "k2 = " << format_double(p.k2) << "\n";
    os << "sigma = " << format_double(p.sigma) << "\n";
    os << "xi = " << format_double(p.xi) << "\n";
    os << "mu_evaluated = " << format_double(std::abs(mu)) << "\n";
    for (const InequalityRow& row : evaluate_system(p, mu)) {
        os << "inequality." << row.label << " = " << row.expression << "\n";
        os << "inequality." << row.label << ".lhs = " << format_double(row.lhs) << "\n";
        os << "inequality." << row.label << ".rhs = " << format_double(row.rhs) << "\n";
        os << "inequality." << row.label << ".status = " << (row.satisfied() ? "SATISFIED" : "VIOLATED") << "\n";
    }
    os << "a = " << format_double(p.a) << "\n";
    os << "a_star = " << format_double(a_star) << "\n";
    os << "note = decay rate restriction on zeta is not computed; decay is checked empirically\n";
}

}  // namespace viscowave
