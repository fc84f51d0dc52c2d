#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "viscowave/config.hpp"
#include "viscowave/output.hpp"
#include "viscowave/pipeline.hpp"

namespace viscowave {

struct SweepAxis {
    std::string name;
    double from = 0.0;
    double to = 0.0;
    int count = 1;

    [[nodiscard]] double value(int i) const noexcept {
        if (count == 1) return from;
        return from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

/// Sweep file:
///   template = "scenarios/decay.cfg"
///   traces = true
///   [axes]
///   mu2 = { from = 0, to = 0.2, count = 9 }
/// Grid points are numbered row-major with the first axis slowest.
struct SweepSpec {
    std::string template_path;
    std::vector<SweepAxis> axes;
    bool traces = true;

    [[nodiscard]] std::size_t size() const noexcept {
        std::size_t n = 1;
        for (const SweepAxis& a : axes) n *= static_cast<std::size_t>(a.count);
        return n;
    }

    [[nodiscard]] std::vector<double> point(std::size_t index) const {
        std::vector<double> v(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto c = static_cast<std::size_t>(axes[k].count);
            v[k] = axes[k].value(static_cast<int>(index % c));
            index /= c;
        }
        return v;
    }
};

[[nodiscard]] inline SweepSpec build_sweep(const ConfigDoc& doc) {
    SweepSpec spec;
    detail::ScenarioReader r(doc);
    std::vector<std::string> axis_names;
    for (const std::string& k : doc.keys()) {
        if (k == "template" || k == "traces") continue;
        if (k.rfind("axes.", 0) != 0) doc.fail(r.line(k), "unknown key '" + k + "'");
        const std::string rest = k.substr(5);
        const auto dot = rest.find('.');
        const std::string name = rest.substr(0, dot);
        const std::string field = dot == std::string::npos ? "" : rest.substr(dot + 1);
        if (!is_sweep_parameter(name)) doc.fail(r.line(k), "'" + name + "' is not a sweepable parameter");
        if (field != "from" && field != "to" && field != "count") {
            doc.fail(r.line(k), "axis '" + name + "' takes { from = .., to = .., count = .. }");
        }
        if (std::find(axis_names.begin(), axis_names.end(), name) == axis_names.end()) axis_names.push_back(name);
    }
    const auto tmpl = r.string("template");
    if (!tmpl) doc.fail(0, "missing 'template'");
    spec.template_path = *tmpl;
    if (const ConfigValue* v = doc.find("traces")) {
        if (!v->is_bool()) doc.fail(v->line, "'traces' must be true or false");
        spec.traces = std::get<bool>(v->data);
    }
    if (axis_names.empty()) doc.fail(0, "no [axes] defined");
    for (const std::string& name : axis_names) {
        const std::string base = "axes." + name;
        SweepAxis axis;
        axis.name = name;
        const auto from = r.number(base + ".from");
        const auto to = r.number(base + ".to");
        const auto count = r.integer(base + ".count");
        if (!from || !to || !count) doc.fail(r.line(base + ".from"), "axis '" + name + "' needs from, to and count");
        if (*count < 1) doc.fail(r.line(base + ".count"), "axis '" + name + "' needs count >= 1");
        axis.from = *from;
        axis.to = *to;
        axis.count = *count;
        spec.axes.push_back(axis);
    }
    return spec;
}

[[nodiscard]] inline SweepSpec load_sweep(const std::string& path) { return build_sweep(load_config(path)); }

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> values;
    std::string outcome;  // "decaying", "growing" or "error"
    std::optional<double> lambda_est;
    std::optional<double> r2;
    std::optional<double> blowup_time;
    std::string error;
};

[[nodiscard]] inline Scenario sweep_point_scenario(const Scenario& base, const SweepSpec& spec, std::size_t index) {
    Scenario sc = base;
    const std::vector<double> v = spec.point(index);
    for (std::size_t k = 0; k < spec.axes.size(); ++k) apply_parameter(sc, spec.axes[k].name, v[k]);
    sc.sim.validate();
    return sc;
}

[[nodiscard]] inline std::string trace_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%04zu.csv", index);
    return buf;
}

/// Jobs default: VISCOWAVE_JOBS if set and positive, else the hardware count.
[[nodiscard]] inline int default_jobs() {
    if (const char* env = std::getenv("VISCOWAVE_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Evaluates every grid point on up to `jobs` threads. Rows come back in
/// grid order; a failing point yields an "error" row. When `trace_dir` is
/// set each point also writes its trace CSV there.
[[nodiscard]] inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Scenario& base, int jobs,
                                                     const std::optional<std::filesystem::path>& trace_dir) {
    const std::size_t n = spec.size();
    std::vector<SweepRow> rows(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            SweepRow& row = rows[i];
            row.index = i;
            row.values = spec.point(i);
            try {
                const Scenario sc = sweep_point_scenario(base, spec, i);
                const Evaluation ev = evaluate(sc);
                if (trace_dir) {
                    std::ofstream out(*trace_dir / trace_file_name(i), std::ios::binary);
                    write_trace_csv(out, sc, ev);
                }
                row.blowup_time = ev.blowup_time;
                if (ev.fit) {
                    row.lambda_est = ev.fit->lambda_est;
                    row.r2 = ev.fit->r2;
                }
                if (!ev.blowup_time && !ev.fit) {
                    row.outcome = "error";
                    row.error = ev.fit_error;
                } else {
                    row.outcome = to_string(ev.outcome);
                }
            } catch (const std::exception& e) {
                row.outcome = "error";
                row.error = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    pool.clear();
    return rows;
}

inline void write_sweep_results(std::ostream& os, const SweepSpec& spec, const Scenario& base,
                                const std::vector<SweepRow>& rows) {
    write_metadata(os, base, resolve_weights(base).weights);
    os << "# sweep_points = " << spec.size() << "\n";
    os << "index";
    for (const SweepAxis& a : spec.axes) os << ',' << a.name;
    os << ",outcome,lambda_est,r2,blowup_time,error\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const SweepRow& row : rows) {
        os << row.index;
        for (double v : row.values) os << ',' << format_double(v);
        std::string err = row.error;
        for (char& c : err) {
            if (c == '"') c = '\'';
            if (c == '\n') c = ' ';
        }
        os << ',' << row.outcome << ',' << opt(row.lambda_est) << ',' << opt(row.r2) << ',' << opt(row.blowup_time)
           << ',' << (err.empty() ? "" : "\"" + err + "\"") << "\n";
    }
}

}  // namespace viscowave
