// viscowave command-line front end: run, sweep, threshold, check, plot.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "viscowave/viscowave.hpp"

namespace fs = std::filesystem;
using namespace viscowave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBlowup = 2;
constexpr int kExitViolation = 3;

fs::path prepare_out(const std::string& dir) {
    fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    fs::create_directories(p);
    return p;
}

void print_warnings(const Scenario& sc) {
    for (const std::string& w : sc.warnings) std::cerr << "warning: " << w << "\n";
}

std::string metadata_text(const Scenario& sc, const LyapunovWeights& w) {
    std::ostringstream os;
    write_metadata(os, sc, w);
    return os.str();
}

int cmd_run(const std::string& config, const std::string& out_dir, bool svg) {
    const Scenario sc = load_scenario(config);
    print_warnings(sc);
    const fs::path out = prepare_out(out_dir);
    const Evaluation ev = evaluate(sc);
    if (!ev.resolved.params && sc.sim.kernel.present()) {
        std::cerr << "warning: Lyapunov weights set to zero (" << ev.resolved.note << ")\n";
    }
    {
        std::ofstream f(out / sc.output.csv, std::ios::binary);
        write_trace_csv(f, sc, ev);
    }
    std::optional<std::string> svg_name = sc.output.svg;
    if (svg && !svg_name) svg_name = "trace.svg";
    if (svg_name) {
        std::vector<double> t;
        std::vector<double> e;
        for (const EnergySample& s : ev.energy) {
            t.push_back(s.t);
            e.push_back(s.E_mod);
        }
        std::ofstream f(out / *svg_name, std::ios::binary);
        write_svg(f, t, e, "E_mod", metadata_text(sc, ev.resolved.weights));
    }
    std::cout << "wrote " << (out / sc.output.csv).string() << " (" << ev.energy.size() << " samples)\n";
    if (ev.fit) {
        std::cout << "fit on [" << format_double(sc.fit_window_start()) << ", " << format_double(sc.fit_window_end())
                  << "]: lambda_est = " << format_double(ev.fit->lambda_est)
                  << ", r2 = " << format_double(ev.fit->r2) << ", outcome = " << to_string(ev.outcome) << "\n";
    } else if (!ev.fit_error.empty()) {
        std::cout << "fit skipped: " << ev.fit_error << "\n";
    }
    if (ev.blowup_time) {
        std::cerr << "blowup at t = " << format_double(*ev.blowup_time) << "\n";
        return kExitBlowup;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& sweep_path, const std::string& out_dir, int jobs) {
    const SweepSpec spec = load_sweep(sweep_path);
    const Scenario base = load_scenario(spec.template_path);
    print_warnings(base);
    const fs::path out = prepare_out(out_dir);
    std::optional<fs::path> trace_dir;
    if (spec.traces) trace_dir = out;
    const auto rows = run_sweep(spec, base, jobs, trace_dir);
    std::ofstream f(out / "results.csv", std::ios::binary);
    write_sweep_results(f, spec, base, rows);
    std::size_t errors = 0;
    for (const SweepRow& r : rows) errors += r.outcome == "error";
    std::cout << "wrote " << (out / "results.csv").string() << " (" << rows.size() << " points, " << errors
              << " errors)\n";
    return kExitOk;
}

int cmd_threshold(const std::string& config, const std::string& out_dir, std::optional<double> mu_flag,
                  const std::string& empirical, const std::string& param) {
    Scenario sc = load_scenario(config);
    print_warnings(sc);
    if (!sc.sim.kernel.present()) {
        std::cerr << "error: threshold needs a memory kernel (kernel = \"none\" leaves g0 undefined)\n";
        return kExitConfig;
    }
    const double mu = std::abs(mu_flag.value_or(sc.sim.mu2));
    const SimConfig& sim = sc.sim;
    LyapunovParams p;
    try {
        p = select_params(sim.kernel, sim.domain, sim.tau, sc.lyapunov_t0, mu);
    } catch (const Error&) {
        p = select_params(sim.kernel, sim.domain, sim.tau, sc.lyapunov_t0, 0.0);
    }
    const double a_star = theoretical_threshold(sim.kernel, sim.domain, sim.tau, sc.lyapunov_t0);
    const fs::path out = prepare_out(out_dir);
    {
        std::ofstream f(out / "certificate.txt", std::ios::binary);
        write_certificate(f, sc, p, mu, a_star);
    }
    std::cout << "a = " << format_double(p.a) << "\na_star = " << format_double(a_star) << "\n";
    for (const InequalityRow& row : evaluate_system(p, mu)) {
        std::cout << (row.satisfied() ? "SATISFIED " : "VIOLATED  ") << row.expression << "  ("
                  << format_double(row.lhs) << " < " << format_double(row.rhs) << ")\n";
    }

    if (!empirical.empty()) {
        if (!is_sweep_parameter(param)) {
            std::cerr << "error: --param must be one of mu1, mu2, tau, beta, alpha\n";
            return kExitConfig;
        }
        const auto comma = empirical.find(',');
        if (comma == std::string::npos) {
            std::cerr << "error: --empirical expects LO,HI\n";
            return kExitConfig;
        }
        const double lo = std::stod(empirical.substr(0, comma));
        const double hi = std::stod(empirical.substr(comma + 1));
        auto probe = [&](double value) {
            Scenario point = sc;
            apply_parameter(point, param, value);
            return probe_config(point.sim, point.fit_window_start(), point.fit_window_end(), value);
        };
        const EmpiricalThreshold emp = empirical_threshold(probe, lo, hi);
        std::ofstream f(out / "empirical.csv", std::ios::binary);
        write_metadata(f, sc, p.weights());
        f << "# parameter = " << param << "\n";
        f << "# mu_star = " << format_double(emp.mu_star) << "\n";
        f << "probe," << param << ",outcome,lambda_est,r2,blowup_time\n";
        for (std::size_t i = 0; i < emp.probes.size(); ++i) {
            const Probe& pr = emp.probes[i];
            f << i << ',' << format_double(pr.mu) << ',' << to_string(pr.outcome) << ','
              << (std::isnan(pr.lambda_est) ? "" : format_double(pr.lambda_est)) << ','
              << (std::isnan(pr.r2) ? "" : format_double(pr.r2)) << ','
              << (pr.blowup_time ? format_double(*pr.blowup_time) : "") << "\n";
        }
        std::cout << "empirical " << param << "* = " << format_double(emp.mu_star) << " (" << emp.probes.size()
                  << " probes)\n";
    }
    return kExitOk;
}

int cmd_check(const std::string& config) {
    const Scenario sc = load_scenario(config);
    print_warnings(sc);
    bool ok = true;
    for (const InvariantResult& r : check_invariants(sc)) {
        const char* status = !r.applicable ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        std::cout << status << "  " << r.name;
        if (r.applicable) std::cout << "  worst_margin = " << format_double(r.worst_margin);
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitViolation;
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir, const std::string& column) {
    const TraceTable table = read_trace_csv(trace_path);
    const fs::path out = prepare_out(out_dir);
    const fs::path name = fs::path(trace_path).stem().string() + ".svg";
    std::ofstream f(out / name, std::ios::binary);
    write_svg(f, table.column("t"), table.column(column), column);
    std::cout << "wrote " << (out / name).string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed viscoelastic wave simulator and stability analysis"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    bool svg = false;
    auto* run = app.add_subcommand("run", "Simulate one scenario and write its trace CSV");
    run->add_option("config", config, "Scenario file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--svg", svg, "Also write a log-scale energy chart");

    std::string sweep_path;
    int jobs = default_jobs();
    auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
    sweep->add_option("sweep", sweep_path, "Sweep file")->required();
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--jobs", jobs, "Concurrent simulations (default: VISCOWAVE_JOBS or CPU count)")
        ->check(CLI::PositiveNumber);

    std::optional<double> mu;
    std::string empirical;
    std::string param = "mu2";
    auto* threshold = app.add_subcommand("threshold", "Write the stability certificate");
    threshold->add_option("config", config, "Scenario file")->required();
    threshold->add_option("--out", out_dir, "Output directory");
    threshold->add_option("--mu", mu, "Feedback magnitude to substitute (default |mu2|)");
    threshold->add_option("--empirical", empirical, "Bisect the classifier on LO,HI");
    threshold->add_option("--param", param, "Parameter varied by --empirical")->default_str("mu2");

    auto* check = app.add_subcommand("check", "Run the invariant suite");
    check->add_option("config", config, "Scenario file")->required();

    std::string trace_path;
    std::string column = "E_mod";
    auto* plot = app.add_subcommand("plot", "Render a trace column as SVG");
    plot->add_option("trace", trace_path, "Trace CSV")->required();
    plot->add_option("--out", out_dir, "Output directory");
    plot->add_option("--column", column, "Column to plot")->default_str("E_mod");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config, out_dir, svg);
        if (*sweep) return cmd_sweep(sweep_path, out_dir, jobs);
        if (*threshold) return cmd_threshold(config, out_dir, mu, empirical, param);
        if (*check) return cmd_check(config);
        if (*plot) return cmd_plot(trace_path, out_dir, column);
    } catch (const Error& e) {
        std::cerr << "error: " << e.detail() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
