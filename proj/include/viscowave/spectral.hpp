#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "viscowave/errors.hpp"

namespace viscowave {

inline constexpr int kDefaultPanels = 4096;

/// The interval (0, L) with homogeneous Dirichlet ends.
class Domain1D {
public:
    explicit Domain1D(double length = std::numbers::pi) : length_(length) {
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw Error(Errc::InvalidConfig, "domain length must be positive and finite");
        }
    }

    [[nodiscard]] double length() const noexcept { return length_; }
    /// Sharp Poincare constant ||u|| <= C* ||u'|| for H^1_0(0, L).
    [[nodiscard]] double poincare() const noexcept { return length_ / std::numbers::pi; }

private:
    double length_;
};

/// Dirichlet eigenfunction w_j(x) = sqrt(2/L) sin(j pi x / L), -w'' = lambda w.
struct SineMode {
    double length = std::numbers::pi;
    int index = 1;
    double lambda = 1.0;

    [[nodiscard]] double operator()(double x) const noexcept {
        return std::sqrt(2.0 / length) * std::sin(index * std::numbers::pi * x / length);
    }
    [[nodiscard]] double derivative(double x) const noexcept {
        const double k = index * std::numbers::pi / length;
        return std::sqrt(2.0 / length) * k * std::cos(k * x);
    }
};

[[nodiscard]] inline SineMode eigenpair(const Domain1D& domain, int j) {
    if (j < 1) {
        throw Error(Errc::BadIndex, "mode index must be >= 1");
    }
    const double k = j * std::numbers::pi / domain.length();
    return SineMode{domain.length(), j, k * k};
}

/// The first N eigenpairs, j = 1..N.
class ModeSet {
public:
    ModeSet(const Domain1D& domain, int count) : domain_(domain) {
        if (count < 1) {
            throw Error(Errc::BadIndex, "mode count must be >= 1");
        }
        modes_.reserve(static_cast<std::size_t>(count));
        lambdas_.reserve(static_cast<std::size_t>(count));
        for (int j = 1; j <= count; ++j) {
            modes_.push_back(eigenpair(domain, j));
            lambdas_.push_back(modes_.back().lambda);
        }
    }

    [[nodiscard]] const Domain1D& domain() const noexcept { return domain_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(modes_.size()); }
    [[nodiscard]] std::span<const double> lambdas() const noexcept { return lambdas_; }
    /// Zero-based access: mode(0) is w_1.
    [[nodiscard]] const SineMode& mode(int i) const { return modes_.at(static_cast<std::size_t>(i)); }

private:
    Domain1D domain_;
    std::vector<SineMode> modes_;
    std::vector<double> lambdas_;
};

/// Composite Simpson rule on [a, b]; an odd panel count is bumped to even.
template <class F>
[[nodiscard]] double simpson(F&& f, double a, double b, int panels) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; ++i) {
        const double v = f(a + i * h);
        (i % 2 != 0 ? odd : even) += v;
    }
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// L^2 projection c_j = (f, w_j), j = 1..N.
template <class F>
[[nodiscard]] std::vector<double> project(F&& f, const ModeSet& modes, int panels = kDefaultPanels) {
    const double length = modes.domain().length();
    std::vector<double> coeffs(static_cast<std::size_t>(modes.size()));
    for (int i = 0; i < modes.size(); ++i) {
        const SineMode& w = modes.mode(i);
        coeffs[static_cast<std::size_t>(i)] =
            simpson([&](double x) { return f(x) * w(x); }, 0.0, length, panels);
    }
    return coeffs;
}

/// u(x_i) = sum_j c_j w_j(x_i).
[[nodiscard]] inline std::vector<double> reconstruct(std::span<const double> coeffs, const ModeSet& modes,
                                                     std::span<const double> xs) {
    if (coeffs.size() != static_cast<std::size_t>(modes.size())) {
        throw Error(Errc::LengthMismatch, "coefficient count does not match mode count");
    }
    std::vector<double> out(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double u = 0.0;
        for (int j = 0; j < modes.size(); ++j) {
            u += coeffs[static_cast<std::size_t>(j)] * modes.mode(j)(xs[i]);
        }
        out[i] = u;
    }
    return out;
}

}  // namespace viscowave
