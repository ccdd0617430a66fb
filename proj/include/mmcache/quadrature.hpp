#pragma once

// Adaptive Gauss-Kronrod (7/15) integration on finite and semi-infinite
// intervals. Semi-infinite domains are compactified with u = (r - a)/(s + r - a)
// before refinement, where s is a caller-supplied length scale.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mmcache/error.hpp"

namespace mmcache {

enum class Transform { Identity, RationalCompactify };

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_depth = 30;
    /// Semi-infinite domains are always compactified; finite ones only on request.
    Transform transform = Transform::Identity;
    /// Characteristic length of the integrand; only used by the compactifying map.
    double scale = 1.0;
    /// Hard cap on the number of live panels.
    std::size_t max_panels = 1u << 15;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

// Nodes and weights from QUADPACK qk15.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b, int depth) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);

    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f1{}, f2{};
    for (int k = 0; k < 7; ++k) {
        const double dx = half * kKronrodNodes[k];
        f1[k] = f(center - dx);
        f2[k] = f(center + dx);
        const double pair = f1[k] + f2[k];
        kronrod += kKronrodWeights[k] * pair;
        abs_sum += kKronrodWeights[k] * (std::abs(f1[k]) + std::abs(f2[k]));
        if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
    }

    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int k = 0; k < 7; ++k)
        asc += kKronrodWeights[k] * (std::abs(f1[k] - mean) + std::abs(f2[k] - mean));

    const double value = kronrod * half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);

    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    if (abs_sum > tiny / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
    return {a, b, value, err, depth};
}

}  // namespace detail

/// Integrates f over [a, b]; b may be +infinity. Throws NumericalError when
/// the requested tolerance is not reached within the refinement limits.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    detail::require(spec.rel_tol > 0.0 && spec.abs_tol > 0.0, "quadrature tolerances must be positive");
    detail::require(!std::isnan(a) && !std::isnan(b) && std::isfinite(a), "invalid integration bounds");
    detail::require(b >= a, "integration bounds must satisfy a <= b");
    if (a == b) return {};

    int evaluations = 0;
    const bool infinite = std::isinf(b);
    const bool compactify = infinite || spec.transform == Transform::RationalCompactify;
    const double scale = spec.scale > 0.0 ? spec.scale : 1.0;

    // For a finite b the compactified upper limit is b' = (b - a)/(s + b - a).
    auto mapped = [&](double u) {
        ++evaluations;
        if (!compactify) return f(u);
        const double one_minus = 1.0 - u;
        const double r = a + scale * u / one_minus;
        const double jac = scale / (one_minus * one_minus);
        const double y = f(r);
        return y == 0.0 ? 0.0 : y * jac;
    };
    double lo = a, hi = b;
    if (compactify) {
        lo = 0.0;
        hi = infinite ? 1.0 : (b - a) / (scale + b - a);
    }

    auto by_error = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
    std::vector<detail::Panel> live;
    std::vector<detail::Panel> frozen;
    live.push_back(detail::gauss_kronrod_15(mapped, lo, hi, 0));

    auto totals = [&]() {
        double value = 0.0, err = 0.0, comp = 0.0;
        auto add = [&](double x) {  // Neumaier
            const double t = value + x;
            comp += std::abs(value) >= std::abs(x) ? (value - t) + x : (x - t) + value;
            value = t;
        };
        for (const auto& p : live) { add(p.value); err += p.error; }
        for (const auto& p : frozen) { add(p.value); err += p.error; }
        return std::pair{value + comp, err};
    };

    while (true) {
        const auto [value, err] = totals();
        const double target = std::max(spec.rel_tol * std::abs(value), spec.abs_tol);
        if (err <= target) return {value, err, evaluations};
        if (live.empty() || live.size() + frozen.size() >= spec.max_panels) {
            throw NumericalError("adaptive quadrature did not converge (estimate " + std::to_string(value) +
                                     ", error bound " + std::to_string(err) + ")",
                                 value, err);
        }
        std::pop_heap(live.begin(), live.end(), by_error);
        const detail::Panel worst = live.back();
        live.pop_back();
        if (worst.depth >= spec.max_depth) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        live.push_back(detail::gauss_kronrod_15(mapped, worst.a, mid, worst.depth + 1));
        std::push_heap(live.begin(), live.end(), by_error);
        live.push_back(detail::gauss_kronrod_15(mapped, mid, worst.b, worst.depth + 1));
        std::push_heap(live.begin(), live.end(), by_error);
    }
}

}  // namespace mmcache
