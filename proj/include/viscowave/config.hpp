#pragma once

// Scenario files: a flat key-value grammar with sections.
//
//   # comment
//   modes = 8
//   kernel = { alpha = 1, beta = 3 }     # or kernel = "none", or a [kernel] section
//   [feedback]
//   mu1 = 0
//   mu2 = 0.05
//   tau = 0.5
//   m = 50
//   [initial]
//   u0 = "parabola"                      # preset name
//   u1 = { coeffs = [0, 0.1] }           # explicit modal coefficients
//
// Values are numbers (the literal `pi` is accepted), "strings", true/false,
// single-line numeric arrays, or single-line inline tables, which flatten
// to dotted keys (kernel.alpha, initial.u1.coeffs, ...).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "viscowave/errors.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/simulate.hpp"
#include "viscowave/spectral.hpp"

namespace viscowave {

struct ConfigValue {
    std::variant<double, std::string, bool, std::vector<double>> data;
    int line = 0;

    [[nodiscard]] bool is_number() const noexcept { return std::holds_alternative<double>(data); }
    [[nodiscard]] bool is_string() const noexcept { return std::holds_alternative<std::string>(data); }
    [[nodiscard]] bool is_bool() const noexcept { return std::holds_alternative<bool>(data); }
    [[nodiscard]] bool is_array() const noexcept { return std::holds_alternative<std::vector<double>>(data); }
};

/// Parsed file: dotted key -> value, with first-appearance order kept.
class ConfigDoc {
public:
    explicit ConfigDoc(std::string source = "config") : source_(std::move(source)) {}

    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] const std::vector<std::string>& keys() const noexcept { return order_; }
    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
    [[nodiscard]] const ConfigValue* find(const std::string& key) const {
        auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    void set(const std::string& key, ConfigValue value) {
        if (values_.count(key) != 0) {
            fail(value.line, "duplicate key '" + key + "'");
        }
        order_.push_back(key);
        values_.emplace(key, std::move(value));
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw Error(Errc::InvalidConfig, source_ + ":" + std::to_string(line) + ": " + msg);
    }

    /// Keys equal to `prefix` or under `prefix.`.
    [[nodiscard]] bool has_prefix(const std::string& prefix) const {
        for (const auto& k : order_) {
            if (k == prefix || k.rfind(prefix + ".", 0) == 0) return true;
        }
        return false;
    }

private:
    std::string source_;
    std::map<std::string, ConfigValue> values_;
    std::vector<std::string> order_;
};

namespace detail {

class LineParser {
public:
    LineParser(const ConfigDoc& doc, std::string_view text, int line) : doc_(doc), s_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    [[nodiscard]] bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    [[nodiscard]] char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) doc_.fail(line_, std::string("expected '") + c + "'");
        ++pos_;
    }

    [[nodiscard]] std::string key() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ == start) doc_.fail(line_, "expected a key");
        std::string k(s_.substr(start, pos_ - start));
        if (k.front() == '.' || k.back() == '.' || k.find("..") != std::string::npos) {
            doc_.fail(line_, "malformed key '" + k + "'");
        }
        return k;
    }

    /// Parses one value into `out` under `prefix`, flattening inline tables.
    void value(ConfigDoc& out, const std::string& prefix) {
        const char c = peek();
        if (c == '"') {
            ++pos_;
            std::string str;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
                str.push_back(s_[pos_++]);
            }
            if (pos_ >= s_.size()) doc_.fail(line_, "unterminated string");
            ++pos_;
            out.set(prefix, {str, line_});
        } else if (c == '[') {
            ++pos_;
            std::vector<double> arr;
            if (peek() == ']') {
                ++pos_;
            } else {
                while (true) {
                    arr.push_back(number());
                    const char d = peek();
                    ++pos_;
                    if (d == ']') break;
                    if (d != ',') doc_.fail(line_, "expected ',' or ']' in array");
                }
            }
            out.set(prefix, {arr, line_});
        } else if (c == '{') {
            ++pos_;
            if (peek() == '}') {
                ++pos_;
                return;
            }
            while (true) {
                const std::string k = key();
                expect('=');
                value(out, prefix + "." + k);
                const char d = peek();
                ++pos_;
                if (d == '}') break;
                if (d != ',') doc_.fail(line_, "expected ',' or '}' in inline table");
            }
        } else {
            const std::size_t save = pos_;
            const std::string word = token();
            if (word == "true" || word == "false") {
                out.set(prefix, {word == "true", line_});
                return;
            }
            pos_ = save;
            out.set(prefix, {number(), line_});
        }
    }

private:
    [[nodiscard]] std::string token() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '}' && s_[pos_] != ' ' &&
               s_[pos_] != '\t') {
            ++pos_;
        }
        return std::string(s_.substr(start, pos_ - start));
    }

    [[nodiscard]] double number() {
        const std::string t = token();
        if (t.empty()) doc_.fail(line_, "expected a value");
        if (t == "pi") return std::numbers::pi;
        if (t == "-pi") return -std::numbers::pi;
        double v = 0.0;
        const char* first = t.data();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            doc_.fail(line_, "not a number: '" + t + "'");
        }
        return v;
    }

    const ConfigDoc& doc_;
    std::string_view s_;
    int line_;
    std::size_t pos_ = 0;
};

[[nodiscard]] inline std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

[[nodiscard]] inline ConfigDoc parse_config(std::string_view text, std::string source = "config") {
    ConfigDoc doc(std::move(source));
    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view raw =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') doc.fail(line_no, "unterminated section header");
            detail::LineParser p(doc, line.substr(1, line.size() - 2), line_no);
            section = p.key();
            if (!p.done()) doc.fail(line_no, "malformed section header");
            continue;
        }
        detail::LineParser p(doc, line, line_no);
        const std::string key = p.key();
        p.expect('=');
        if (p.done()) doc.fail(line_no, "missing value for '" + key + "'");
        p.value(doc, section.empty() ? key : section + "." + key);
        if (!p.done()) doc.fail(line_no, "trailing characters after value");
    }
    return doc;
}

[[nodiscard]] inline ConfigDoc load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidConfig, path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

/// Shortest round-trip decimal form; used for every number this project writes.
[[nodiscard]] inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

[[nodiscard]] inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Initial-data presets

/// Spatial shapes available by name. "sine k" is sin(k pi x / L) and maps to
/// the exact coefficient sqrt(L/2) on mode k; the others are projected.
[[nodiscard]] inline std::vector<double> preset_coefficients(std::string_view name, const ModeSet& modes,
                                                             int panels, std::vector<std::string>* warnings) {
    const auto n = static_cast<std::size_t>(modes.size());
    const double length = modes.domain().length();
    std::vector<double> c(n, 0.0);
    if (name == "zero") return c;
    if (name.rfind("sine", 0) == 0) {
        int k = 0;
        const std::string_view rest = detail::trim(name.substr(4));
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
        if (ec != std::errc() || ptr != rest.data() + rest.size() || k < 1) {
            throw Error(Errc::InvalidConfig, "preset 'sine k' needs an integer k >= 1");
        }
        if (static_cast<std::size_t>(k) > n) {
            if (warnings) warnings->push_back("preset '" + std::string(name) + "' lies above the mode cutoff; it projects to zero");
            return c;
        }
        c[static_cast<std::size_t>(k - 1)] = std::sqrt(length / 2.0);
        return c;
    }
    if (name == "parabola") {
        return project([&](double x) { return x * (length - x); }, modes, panels);
    }
    if (name == "bump") {
        return project(
            [&](double x) {
                const double r = (x - 0.5 * length) / (0.25 * length);
                return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
            },
            modes, panels);
    }
    throw Error(Errc::InvalidConfig, "unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Scenario

struct OutputSettings {
    std::string csv = "trace.csv";
    std::optional<std::string> svg;
};

struct Scenario {
    SimConfig sim;
    int panels = kDefaultPanels;
    double lyapunov_t0 = 1.0;
    std::optional<double> xi;
    std::optional<double> sigma;
    std::optional<double> eps1;
    std::optional<double> eps2;
    std::optional<double> fit_start;
    std::optional<double> fit_end;
    OutputSettings output;
    std::vector<std::string> warnings;

    [[nodiscard]] double fit_window_start() const { return fit_start.value_or(sim.t_end / 6.0); }
    [[nodiscard]] double fit_window_end() const { return fit_end.value_or(sim.t_end); }

    /// Canonical text of every field that influences computed output.
    [[nodiscard]] std::string canonical() const {
        std::ostringstream os;
        auto vec = [&](const char* name, const std::vector<double>& v) {
            os << name << "=[";
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
            os << "]\n";
        };
        os << "domain.length=" << format_double(sim.domain.length()) << "\n";
        os << "modes=" << sim.modes << "\n";
        if (sim.kernel.present()) {
            os << "kernel.alpha=" << format_double(sim.kernel.alpha()) << "\n";
            os << "kernel.beta=" << format_double(sim.kernel.beta()) << "\n";
        } else {
            os << "kernel=none\n";
        }
        os << "feedback.mu1=" << format_double(sim.mu1) << "\n";
        os << "feedback.mu2=" << format_double(sim.mu2) << "\n";
        os << "feedback.tau=" << format_double(sim.tau) << "\n";
        os << "feedback.m=" << sim.steps_per_delay << "\n";
        os << "time.t_end=" << format_double(sim.t_end) << "\n";
        os << "time.sample_every=" << sim.sample_every << "\n";
        vec("initial.u0", sim.u0);
        vec("initial.u1", sim.u1);
        vec("history.f0", sim.f0);
        os << "ode_form=" << (sim.ode_form == OdeForm::Convolution ? "convolution" : "as_printed") << "\n";
        os << "numerics.overflow_guard=" << format_double(sim.overflow_guard) << "\n";
        os << "debug.memory_scale=" << format_double(sim.memory_fault_scale) << "\n";
        os << "domain.panels=" << panels << "\n";
        os << "lyapunov.t0=" << format_double(lyapunov_t0) << "\n";
        auto opt = [&](const char* name, const std::optional<double>& v) {
            os << name << "=" << (v ? format_double(*v) : std::string("auto")) << "\n";
        };
        opt("lyapunov.xi", xi);
        opt("lyapunov.sigma", sigma);
        opt("lyapunov.eps1", eps1);
        opt("lyapunov.eps2", eps2);
        os << "fit.t_start=" << format_double(fit_window_start()) << "\n";
        os << "fit.t_end=" << format_double(fit_window_end()) << "\n";
        return os.str();
    }

    [[nodiscard]] std::string hash() const {
        char buf[17];
        const std::uint64_t h = fnv1a64(canonical());
        static constexpr char hex[] = "0123456789abcdef";
        for (int i = 0; i < 16; ++i) buf[i] = hex[(h >> (60 - 4 * i)) & 0xF];
        buf[16] = '\0';
        return buf;
    }
};

namespace detail {

inline const std::vector<std::string>& known_scalar_keys() {
    static const std::vector<std::string> keys = {
        "modes", "ode_form", "kernel", "kernel.alpha", "kernel.beta", "domain.length", "domain.panels",
        "feedback.mu1", "feedback.mu2", "feedback.tau", "feedback.m", "time.t_end", "time.sample_every",
        "output.csv", "output.svg", "lyapunov.t0", "lyapunov.xi", "lyapunov.sigma", "lyapunov.eps1",
        "lyapunov.eps2", "fit.t_start", "fit.t_end", "numerics.overflow_guard", "debug.memory_scale",
    };
    return keys;
}

inline bool is_data_key(const std::string& k) {
    for (const char* base : {"initial.u0", "initial.u1", "history.f0"}) {
        const std::string b = base;
        if (k == b || k == b + ".coeffs" || k == b + ".preset" || k == b + ".scale") return true;
    }
    return false;
}

class ScenarioReader {
public:
    explicit ScenarioReader(const ConfigDoc& doc) : doc_(doc) {}

    [[nodiscard]] std::optional<double> number(const std::string& key) const {
        const ConfigValue* v = doc_.find(key);
        if (!v) return std::nullopt;
        if (!v->is_number()) doc_.fail(v->line, "'" + key + "' must be a number");
        if (!std::isfinite(std::get<double>(v->data))) doc_.fail(v->line, "'" + key + "' must be finite");
        return std::get<double>(v->data);
    }

    [[nodiscard]] std::optional<int> integer(const std::string& key) const {
        auto d = number(key);
        if (!d) return std::nullopt;
        if (std::floor(*d) != *d || std::abs(*d) > 1e9) doc_.fail(line(key), "'" + key + "' must be an integer");
        return static_cast<int>(*d);
    }

    [[nodiscard]] std::optional<std::string> string(const std::string& key) const {
        const ConfigValue* v = doc_.find(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) doc_.fail(v->line, "'" + key + "' must be a string");
        return std::get<std::string>(v->data);
    }

    [[nodiscard]] int line(const std::string& key) const {
        const ConfigValue* v = doc_.find(key);
        return v ? v->line : 0;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const { doc_.fail(line(key), msg); }

    [[nodiscard]] const ConfigDoc& doc() const noexcept { return doc_; }

private:
    const ConfigDoc& doc_;
};

/// Resolves initial.u0 / initial.u1 / history.f0 to modal coefficients.
/// Returns nullopt for history "match_u1".
inline std::optional<std::vector<double>> read_data(const ScenarioReader& r, const std::string& base,
                                                    const std::string& fallback, const ModeSet& modes, int panels,
                                                    std::vector<std::string>& warnings) {
    const ConfigDoc& doc = r.doc();
    const auto n = static_cast<std::size_t>(modes.size());
    std::vector<double> coeffs;
    std::string anchor = base;
    double scale = 1.0;
    auto from_array = [&](const std::string& key) {
        const ConfigValue* v = doc.find(key);
        coeffs = std::get<std::vector<double>>(v->data);
        if (coeffs.size() > n) r.fail(key, "'" + key + "' has more coefficients than modes");
        coeffs.resize(n, 0.0);
    };
    auto from_preset = [&](const std::string& key, const std::string& name) -> bool {
        if (name == "match_u1") {
            if (base != "history.f0") r.fail(key, "preset 'match_u1' is only valid for history.f0");
            return false;
        }
        try {
            coeffs = preset_coefficients(name, modes, panels, &warnings);
        } catch (const Error& e) {
            r.fail(key, e.detail());
        }
        return true;
    };

    if (const ConfigValue* v = doc.find(base)) {
        if (v->is_string()) {
            if (!from_preset(base, std::get<std::string>(v->data))) return std::nullopt;
        } else if (v->is_array()) {
            from_array(base);
        } else {
            r.fail(base, "'" + base + "' must be a preset name, an array or { coeffs = [...] }");
        }
    } else if (doc.has(base + ".coeffs") || doc.has(base + ".preset")) {
        if (doc.has(base + ".coeffs") && doc.has(base + ".preset")) {
            r.fail(base + ".coeffs", "give either coeffs or preset for '" + base + "', not both");
        }
        if (const ConfigValue* c = doc.find(base + ".coeffs")) {
            anchor = base + ".coeffs";
            if (!c->is_array()) r.fail(anchor, "'" + anchor + "' must be an array");
            from_array(anchor);
        } else {
            anchor = base + ".preset";
            const auto name = r.string(anchor);
            if (!from_preset(anchor, *name)) return std::nullopt;
        }
        if (auto s = r.number(base + ".scale")) scale = *s;
    } else {
        if (doc.has(base + ".scale")) r.fail(base + ".scale", "'scale' needs a preset or coeffs");
        if (!from_preset(base, fallback)) return std::nullopt;
    }
    for (double& c : coeffs) c *= scale;
    return coeffs;
}

}  // namespace detail

[[nodiscard]] inline Scenario build_scenario(const ConfigDoc& doc) {
    detail::ScenarioReader r(doc);
    for (const std::string& k : doc.keys()) {
        const auto& known = detail::known_scalar_keys();
        if (std::find(known.begin(), known.end(), k) == known.end() && !detail::is_data_key(k)) {
            doc.fail(r.line(k), "unknown key '" + k + "'");
        }
    }

    Scenario sc;
    SimConfig& sim = sc.sim;
    try {
        sim.domain = Domain1D(r.number("domain.length").value_or(std::numbers::pi));
    } catch (const Error&) {
        r.fail("domain.length", "domain.length must be positive");
    }
    sim.modes = r.integer("modes").value_or(8);
    if (sim.modes < 1) r.fail("modes", "modes must be >= 1");
    sc.panels = r.integer("domain.panels").value_or(kDefaultPanels);
    if (sc.panels < 2 || sc.panels % 2 != 0) r.fail("domain.panels", "domain.panels must be an even integer >= 2");

    if (doc.has("kernel")) {
        const auto k = r.string("kernel");
        if (*k != "none") r.fail("kernel", "kernel must be \"none\" or { alpha = .., beta = .. }");
        if (doc.has("kernel.alpha") || doc.has("kernel.beta")) r.fail("kernel", "kernel given twice");
        sim.kernel = KernelSpec::none();
    } else if (doc.has("kernel.alpha") || doc.has("kernel.beta")) {
        if (!doc.has("kernel.alpha") || !doc.has("kernel.beta")) {
            r.fail(doc.has("kernel.alpha") ? "kernel.alpha" : "kernel.beta", "kernel needs both alpha and beta");
        }
        try {
            sim.kernel = KernelSpec::validate(*r.number("kernel.alpha"), *r.number("kernel.beta"));
        } catch (const Error& e) {
            r.fail("kernel.alpha", e.detail());
        }
    }

    sim.mu1 = r.number("feedback.mu1").value_or(0.0);
    sim.mu2 = r.number("feedback.mu2").value_or(0.0);
    sim.tau = r.number("feedback.tau").value_or(1.0);
    if (!(sim.tau > 0.0)) r.fail("feedback.tau", "feedback.tau must be > 0");
    sim.steps_per_delay = r.integer("feedback.m").value_or(20);
    if (sim.steps_per_delay < 2) r.fail("feedback.m", "feedback.m must be an integer >= 2");
    sim.t_end = r.number("time.t_end").value_or(10.0);
    if (sim.t_end < 0.0) r.fail("time.t_end", "time.t_end must be >= 0");
    sim.sample_every = r.integer("time.sample_every").value_or(1);
    if (sim.sample_every < 1) r.fail("time.sample_every", "time.sample_every must be >= 1");

    if (auto form = r.string("ode_form")) {
        if (*form == "convolution") {
            sim.ode_form = OdeForm::Convolution;
        } else if (*form == "as_printed") {
            sim.ode_form = OdeForm::AsPrinted;
            sc.warnings.push_back("ode_form = \"as_printed\" integrates the non-default comparison form");
        } else {
            r.fail("ode_form", "ode_form must be \"convolution\" or \"as_printed\"");
        }
    }
    sim.overflow_guard = r.number("numerics.overflow_guard").value_or(1e12);
    if (!(sim.overflow_guard > 0.0)) r.fail("numerics.overflow_guard", "overflow_guard must be > 0");
    sim.memory_fault_scale = r.number("debug.memory_scale").value_or(1.0);

    const ModeSet modes(sim.domain, sim.modes);
    sim.u0 = *detail::read_data(r, "initial.u0", "sine 1", modes, sc.panels, sc.warnings);
    sim.u1 = *detail::read_data(r, "initial.u1", "zero", modes, sc.panels, sc.warnings);
    auto f0 = detail::read_data(r, "history.f0", "match_u1", modes, sc.panels, sc.warnings);
    sim.f0 = f0 ? *f0 : sim.u1;
    {
        double d = 0.0;
        for (std::size_t j = 0; j < sim.f0.size(); ++j) d = std::max(d, std::abs(sim.f0[j] - sim.u1[j]));
        if (d > 1e-12) {
            sc.warnings.push_back("history f0 at s = 0 differs from u1 (max modal gap " + format_double(d) +
                                  "); the slot at s = 0 uses u1");
        }
    }

    sc.lyapunov_t0 = r.number("lyapunov.t0").value_or(1.0);
    if (!(sc.lyapunov_t0 > 0.0)) r.fail("lyapunov.t0", "lyapunov.t0 must be > 0");
    sc.xi = r.number("lyapunov.xi");
    sc.sigma = r.number("lyapunov.sigma");
    sc.eps1 = r.number("lyapunov.eps1");
    sc.eps2 = r.number("lyapunov.eps2");
    for (const char* k : {"lyapunov.xi", "lyapunov.sigma", "lyapunov.eps1", "lyapunov.eps2"}) {
        if (auto v = r.number(k); v && *v < 0.0) r.fail(k, std::string(k) + " must be >= 0");
    }
    sc.fit_start = r.number("fit.t_start");
    sc.fit_end = r.number("fit.t_end");

    if (auto csv = r.string("output.csv")) sc.output.csv = *csv;
    if (const ConfigValue* v = doc.find("output.svg")) {
        if (v->is_bool()) {
            if (std::get<bool>(v->data)) sc.output.svg = "trace.svg";
        } else if (v->is_string()) {
            sc.output.svg = std::get<std::string>(v->data);
        } else {
            r.fail("output.svg", "output.svg must be true/false or a file name");
        }
    }
    return sc;
}

[[nodiscard]] inline Scenario load_scenario(const std::string& path) { return build_scenario(load_config(path)); }

/// Parameters a sweep axis may vary.
inline constexpr const char* kSweepParameters[] = {"mu1", "mu2", "tau", "beta", "alpha"};

[[nodiscard]] inline bool is_sweep_parameter(std::string_view name) {
    for (const char* p : kSweepParameters) {
        if (name == p) return true;
    }
    return false;
}

/// Applies one axis value to a scenario.
inline void apply_parameter(Scenario& sc, std::string_view name, double value) {
    SimConfig& sim = sc.sim;
    if (name == "mu1") {
        sim.mu1 = value;
    } else if (name == "mu2") {
        sim.mu2 = value;
    } else if (name == "tau") {
        if (!(value > 0.0)) throw Error(Errc::InvalidConfig, "tau must be > 0");
        sim.tau = value;
    } else if (name == "beta" || name == "alpha") {
        if (!sim.kernel.present()) throw Error(Errc::InvalidConfig, "cannot vary a kernel parameter without a kernel");
        const double a = name == "alpha" ? value : sim.kernel.alpha();
        const double b = name == "beta" ? value : sim.kernel.beta();
        sim.kernel = KernelSpec::validate(a, b);
    } else {
        throw Error(Errc::InvalidConfig, "unknown sweep parameter '" + std::string(name) + "'");
    }
}

}  // namespace viscowave
