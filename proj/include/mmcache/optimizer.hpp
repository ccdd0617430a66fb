#pragma once

// Cache placement: dual subgradient for the noise-limited objective, a
// convex-concave procedure for the interference-limited one, and the
// most-popular / uniform / random baselines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmcache/asp.hpp"
#include "mmcache/association.hpp"
#include "mmcache/error.hpp"
#include "mmcache/network.hpp"
#include "mmcache/policy.hpp"
#include "mmcache/popularity.hpp"

namespace mmcache {

/// Euclidean projection onto {0 <= p <= 1, sum p <= budget}.
inline std::vector<double> project_capped_simplex(std::vector<double> y, double budget) {
    detail::require(budget >= 0.0, "budget must be nonnegative");
    auto clipped_sum = [&](double shift) {
        double s = 0.0;
        for (double v : y) s += std::clamp(v - shift, 0.0, 1.0);
        return s;
    };
    double shift = 0.0;
    if (clipped_sum(0.0) > budget) {
        double lo = 0.0, hi = *std::max_element(y.begin(), y.end());
        for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (clipped_sum(mid) > budget ? lo : hi) = mid;
        }
        shift = hi;
    }
    for (double& v : y) v = std::clamp(v - shift, 0.0, 1.0);
    return y;
}

// ---------------------------------------------------------------------------
// Baselines

/// Most popular content: the first C files (lowest index wins ties).
inline std::vector<double> baseline_mc(const PopularityProfile& profile, int capacity) {
    detail::require(capacity >= 0 && static_cast<std::size_t>(capacity) <= profile.catalog_size(),
                    "cache size must lie in [0, L]");
    std::vector<double> p(profile.catalog_size(), 0.0);
    std::fill_n(p.begin(), capacity, 1.0);
    return p;
}

inline std::vector<double> baseline_uc(std::size_t catalog_size, int capacity) {
    detail::require(catalog_size >= 1, "catalog must be nonempty");
    detail::require(capacity >= 0 && static_cast<std::size_t>(capacity) <= catalog_size,
                    "cache size must lie in [0, L]");
    return std::vector<double>(catalog_size, static_cast<double>(capacity) / catalog_size);
}

/// Random caching: uniform draws rescaled to sum to C, with any excess above 1
/// handed to the unsaturated entries until feasible.
template <class Rng>
std::vector<double> baseline_rc(std::size_t catalog_size, int capacity, Rng& rng) {
    detail::require(catalog_size >= 1, "catalog must be nonempty");
    detail::require(capacity >= 0 && static_cast<std::size_t>(capacity) <= catalog_size,
                    "cache size must lie in [0, L]");
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> p(catalog_size);
    for (double& v : p) v = uniform(rng);
    if (capacity == 0) return std::vector<double>(catalog_size, 0.0);
    if (static_cast<std::size_t>(capacity) == catalog_size) return std::vector<double>(catalog_size, 1.0);

    std::vector<bool> saturated(catalog_size, false);
    double remaining = capacity;
    for (std::size_t round = 0; round <= catalog_size; ++round) {
        double free_mass = 0.0;
        for (std::size_t i = 0; i < catalog_size; ++i)
            if (!saturated[i]) free_mass += p[i];
        if (free_mass <= 0.0) break;
        const double scale = remaining / free_mass;
        bool changed = false;
        for (std::size_t i = 0; i < catalog_size; ++i) {
            if (saturated[i]) continue;
            p[i] *= scale;
            if (p[i] >= 1.0) {
                p[i] = 1.0;
                saturated[i] = true;
                remaining -= 1.0;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Results

struct DualState {
    double omega_mm = 0.0;
    double omega_mu = 0.0;
    std::vector<double> mu_mm;
    std::vector<double> mu_mu;
    double step_a = 0.1;
    double step_b = 10.0;
};

struct OptimizationResult {
    CachingPolicy policy;
    /// Objective achieved by `policy` (total ASP of the regime's model).
    double objective = 0.0;
    int iterations = 0;
    double duality_gap = 0.0;  // NL only
    DualState dual;            // NL only
    /// Minimized DC objective after every outer iteration (IL only).
    std::vector<double> trace;
    bool monotone_in_popularity = true;
};

/// Optimizer failure carrying the best feasible iterate found.
class OptimizerError : public NumericalError {
public:
    OptimizerError(const std::string& what, OptimizationResult best)
        : NumericalError(what, best.objective, best.duality_gap), best_(std::move(best)) {}

    const OptimizationResult& best() const noexcept { return best_; }

private:
    OptimizationResult best_;
};

// ---------------------------------------------------------------------------
// Noise-limited: Lagrangian dual with closed-form primal updates

struct NlOptions {
    double step_a = 0.1;
    double step_b = 10.0;
    double tolerance = 1e-8;
    int max_iterations = 100000;
};

/// One tier of the NL problem: maximize sum f_i (1 - exp(-a_i p_i)) subject to
/// the box and the budget. The association factor scales the whole objective
/// and is left out, so the multipliers here are in units of it.
struct NlTierSolution {
    std::vector<double> p;
    double omega = 0.0;
    std::vector<double> mu;
    double objective = 0.0;
    double dual_value = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline double nl_tier_objective(const std::vector<double>& f, const std::vector<double>& a,
                                const std::vector<double>& p) {
    NeumaierSum s;
    for (std::size_t i = 0; i < f.size(); ++i) s.add(f[i] * -std::expm1(-a[i] * p[i]));
    return s.value();
}

inline std::vector<double> nl_primal(const std::vector<double>& f, const std::vector<double>& a, double omega,
                                     const std::vector<double>& mu) {
    std::vector<double> p(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (a[i] <= 0.0 || f[i] <= 0.0) continue;
        const double price = std::max(omega + mu[i], 1e-300);
        p[i] = std::max(0.0, std::log(f[i] * a[i] / price) / a[i]);
    }
    return p;
}

inline double nl_lagrangian(const std::vector<double>& f, const std::vector<double>& a, const std::vector<double>& p,
                            double omega, const std::vector<double>& mu, double budget) {
    double value = nl_tier_objective(f, a, p) - omega * (std::accumulate(p.begin(), p.end(), 0.0) - budget);
    for (std::size_t i = 0; i < p.size(); ++i) value -= mu[i] * (p[i] - 1.0);
    return value;
}

inline bool nonincreasing(const std::vector<double>& v, double slack) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + slack) return false;
    return true;
}

}  // namespace detail

inline NlTierSolution solve_nl_tier(const std::vector<double>& f, const std::vector<double>& a, double budget,
                                    const NlOptions& opt = {}) {
    detail::require(f.size() == a.size() && !f.empty(), "popularity and exponent vectors must match");
    detail::require(budget >= 0.0, "budget must be nonnegative");
    const std::size_t L = f.size();

    // Price at which file i just fills its box. Given omega, the box multiplier
    // minimizing the dual is max(0, saturation - omega), so it is set exactly.
    std::vector<double> saturation(L, 0.0);
    double open_files = 0.0;
    for (std::size_t i = 0; i < L; ++i)
        if (a[i] > 0.0 && f[i] > 0.0) {
            saturation[i] = f[i] * a[i] * std::exp(-a[i]);
            open_files += 1.0;
        }
    std::vector<double> mu(L, 0.0);
    auto box_multipliers = [&](double w) {
        for (std::size_t i = 0; i < L; ++i) mu[i] = std::max(0.0, saturation[i] - w);
    };

    NlTierSolution out;
    out.mu.assign(L, 0.0);
    double omega = 0.0;
    int k = 0;
    if (open_files <= budget) {
        // Every file that can be cached fits: the budget price is zero.
        out.converged = true;
    } else {
        // Start from the price at which the uniform placement C / L is stationary.
        const double p0 = budget / L;
        for (std::size_t i = 0; i < L; ++i) omega += f[i] * a[i] * std::exp(-a[i] * p0);
        omega /= L;

        // Subgradient steps on theta = log(omega), where each p_i is linear
        // with slope -1 / a_i. The step a / (b + k) is measured in units of
        // that slope and normalized so that the first step is a Newton step
        // on the current linear piece. The budget excess is monotone in theta,
        // so a sign bracket catches steps that overshoot, and flat stretches
        // where every file sits at a box bound are crossed by expansion.
        const double first_step = opt.step_a / opt.step_b;
        double theta = std::log(omega);
        double lo = -std::numeric_limits<double>::infinity();  // excess > 0 here
        double hi = std::numeric_limits<double>::infinity();   // excess < 0 here
        double expansion = 1.0;
        for (; k < opt.max_iterations; ++k) {
            omega = std::exp(theta);
            box_multipliers(omega);
            const auto p = detail::nl_primal(f, a, omega, mu);
            double slope = 0.0;
            for (std::size_t i = 0; i < L; ++i)
                if (p[i] > 0.0 && p[i] < 1.0) slope += 1.0 / a[i];
            const double excess = std::accumulate(p.begin(), p.end(), 0.0) - budget;
            if (excess > 0.0) lo = std::max(lo, theta);
            if (excess < 0.0) hi = std::min(hi, theta);

            double next;
            if (slope > 0.0) {
                next = theta + (opt.step_a / (opt.step_b + k)) / first_step * excess / slope;
            } else {
                next = theta + (excess > 0.0 ? expansion : excess < 0.0 ? -expansion : 0.0);
                expansion *= 2.0;
            }
            if (std::isfinite(lo) && std::isfinite(hi) && !(next > lo && next < hi)) next = 0.5 * (lo + hi);
            const double change = std::abs(next - theta) * (slope > 0.0 ? slope : 1.0);
            theta = next;
            if (change < opt.tolerance) {
                out.converged = true;
                ++k;
                break;
            }
        }
        omega = std::exp(theta);
    }
    box_multipliers(omega);
    auto p = detail::nl_primal(f, a, omega, mu);
    out.dual_value = detail::nl_lagrangian(f, a, p, omega, mu, budget);
    out.p = project_capped_simplex(std::move(p), budget);
    out.omega = omega;
    out.mu = std::move(mu);
    out.objective = detail::nl_tier_objective(f, a, out.p);
    out.iterations = k;
    return out;
}

/// Algorithm 1: NL caching probabilities for both tiers.
inline OptimizationResult optimize_nl(const NetworkConfig& cfg, const PopularityProfile& profile,
                                      const NlOptions& opt = {}, const QuadratureSpec& spec = {}) {
    cfg.validate_for_catalog(profile.catalog_size());
    const std::size_t L = profile.catalog_size();
    const auto& f = profile.probabilities();
    std::vector<double> a_mm(L), a_mu(L);
    for (std::size_t i = 1; i <= L; ++i) {
        a_mm[i - 1] = nl_mm_exponent(i, cfg, spec);
        a_mu[i - 1] = nl_mu_exponent(i, cfg);
        detail::require(std::isfinite(a_mm[i - 1]) && std::isfinite(a_mu[i - 1]), "NL exponents must be finite");
    }
    const auto assoc = association_probability(cfg, spec);
    const auto mm = solve_nl_tier(f, a_mm, cfg.cache_mm, opt);
    const auto mu = solve_nl_tier(f, a_mu, cfg.cache_mu, opt);

    OptimizationResult r;
    r.policy = {mm.p, mu.p};
    r.objective = assoc.p_mm * mm.objective + assoc.p_mu * mu.objective;
    r.duality_gap = assoc.p_mm * (mm.dual_value - mm.objective) + assoc.p_mu * (mu.dual_value - mu.objective);
    r.iterations = std::max(mm.iterations, mu.iterations);
    r.dual = {mm.omega, mu.omega, mm.mu, mu.mu, opt.step_a, opt.step_b};
    const bool uniform_mm = std::adjacent_find(a_mm.begin(), a_mm.end(), std::not_equal_to<>()) == a_mm.end();
    const bool uniform_mu = std::adjacent_find(a_mu.begin(), a_mu.end(), std::not_equal_to<>()) == a_mu.end();
    r.monotone_in_popularity = (!uniform_mm || detail::nonincreasing(mm.p, 1e-12)) &&
                               (!uniform_mu || detail::nonincreasing(mu.p, 1e-12));
    if (!mm.converged || !mu.converged)
        throw OptimizerError("dual subgradient did not converge within " + std::to_string(opt.max_iterations) +
                                 " iterations",
                             r);
    return r;
}

// ---------------------------------------------------------------------------
// Interference-limited: difference of convex functions

struct IlOptions {
    double damping_step = 1e-4;  // line-7 sign damping
    double threshold = 1e-5;     // stop when the objective moves less than this
    int max_iterations = 500;
    bool damping = true;
    double inner_tolerance = 1e-8;
    int inner_max_iterations = 100000;
    double monotonicity_slack = 1e-9;
};

/// Separable DC objective of one tier, sum_i sum_t s_t w_t exp(-kappa_t (1 - p_i)),
/// minimized as G - H with G the even (s = -1) terms and H the odd ones.
struct DcTier {
    struct Term {
        double weight;  // > 0
        double kappa;   // >= 0
        bool odd;
    };
    std::vector<std::vector<Term>> terms;  // per file
    double budget = 0.0;

    std::size_t size() const { return terms.size(); }

    static double value(const Term& t, double p) { return t.weight * std::exp(-t.kappa * (1.0 - p)); }

    double h(const std::vector<double>& p) const { return part(p, true); }
    double g(const std::vector<double>& p) const { return part(p, false); }
    /// Minimized objective g - h.
    double objective(const std::vector<double>& p) const { return g(p) - h(p); }

    std::vector<double> grad_h(const std::vector<double>& p) const { return grad(p, true); }
    std::vector<double> grad_g(const std::vector<double>& p) const { return grad(p, false); }

    /// Upper bound on the curvature of g along any coordinate.
    double g_curvature() const {
        double c = 0.0;
        for (const auto& file : terms) {
            double ci = 0.0;
            for (const auto& t : file)
                if (!t.odd) ci += t.weight * t.kappa * t.kappa;
            c = std::max(c, ci);
        }
        return c;
    }

private:
    double part(const std::vector<double>& p, bool odd) const {
        detail::NeumaierSum s;
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (const auto& t : terms[i])
                if (t.odd == odd) s.add(value(t, p[i]));
        return s.value();
    }
    std::vector<double> grad(const std::vector<double>& p, bool odd) const {
        std::vector<double> d(terms.size(), 0.0);
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (const auto& t : terms[i])
                if (t.odd == odd) d[i] += t.kappa * value(t, p[i]);
        return d;
    }
};

struct DcTierSolution {
    std::vector<double> p;
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

/// Projected gradient with Armijo backtracking for min g(p) - c.p over the
/// capped simplex. Stops when the unit-step gradient mapping is below `tol`.
inline std::vector<double> solve_convexified(const DcTier& tier, const std::vector<double>& c,
                                             std::vector<double> p, double tol, int max_iterations) {
    auto gradient = [&](const std::vector<double>& x) {
        auto d = tier.grad_g(x);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= c[i];
        return d;
    };
    auto stationarity = [&](const std::vector<double>& x, const std::vector<double>& d) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - d[i];
        const auto z = project_capped_simplex(std::move(y), tier.budget);
        double r = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(z[i] - x[i]));
        return r;
    };
    // F(q) - F(p), formed term by term so that it stays accurate when g itself
    // is a large sum with heavy cancellation against the linear part.
    auto change = [&](const std::vector<double>& from, const std::vector<double>& to) {
        NeumaierSum s;
        for (std::size_t i = 0; i < from.size(); ++i) {
            const double step = to[i] - from[i];
            if (step == 0.0) continue;
            for (const auto& t : tier.terms[i])
                if (!t.odd) s.add(DcTier::value(t, from[i]) * std::expm1(t.kappa * step));
            s.add(-c[i] * step);
        }
        return s.value();
    };

    const double curvature = tier.g_curvature();
    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    double t = curvature > 0.0 ? 1.0 / curvature : 1e3 / std::max(cmax, 1e-300);
    const double t_max = 1e12;

    double residual = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        const auto d = gradient(p);
        residual = stationarity(p, d);
        if (residual < tol) return p;
        t = std::min(2.0 * t, t_max);
        for (int bt = 0;; ++bt) {
            std::vector<double> y(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) y[i] = p[i] - t * d[i];
            auto q = project_capped_simplex(std::move(y), tier.budget);
            double model = 0.0;
            double dist2 = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double s = q[i] - p[i];
                model += d[i] * s;
                dist2 += s * s;
            }
            model += dist2 / (2.0 * t);
            if (dist2 == 0.0) return p;
            if (change(p, q) <= model || bt > 60) {
                p = std::move(q);
                break;
            }
            t *= 0.5;
        }
    }
    throw NumericalError("projected gradient did not reach stationarity", tier.objective(p), residual);
}

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace detail

/// Convex-concave procedure over several separable DC tiers sharing one
/// stopping rule on the summed objective. Each outer step solves every
/// convexified tier, then applies the sign-scaled damping of the printed
/// algorithm; a damped point that would raise a tier's objective is replaced by
/// the plain CCP point, which never does.
inline std::vector<DcTierSolution> solve_dc(const std::vector<const DcTier*>& tiers,
                                            std::vector<std::vector<double>> p, const IlOptions& opt = {}) {
    detail::require(tiers.size() == p.size(), "one starting point per tier");
    std::vector<DcTierSolution> out(tiers.size());
    std::vector<double> v(tiers.size());
    for (std::size_t t = 0; t < tiers.size(); ++t) {
        v[t] = tiers[t]->objective(p[t]);
        out[t].trace.push_back(v[t]);
    }
    auto total = [](const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0); };
    bool converged = false;
    int k = 0;
    while (k < opt.max_iterations && !converged) {
        const double before = total(v);
        for (std::size_t t = 0; t < tiers.size(); ++t) {
            const DcTier& tier = *tiers[t];
            const auto dh = tier.grad_h(p[t]);
            auto next = detail::solve_convexified(tier, dh, p[t], opt.inner_tolerance, opt.inner_max_iterations);
            double v_next = tier.objective(next);
            if (opt.damping) {
                std::vector<double> damped(next.size());
                for (std::size_t i = 0; i < next.size(); ++i)
                    damped[i] = p[t][i] + detail::sign(next[i] - p[t][i]) * dh[i] * opt.damping_step;
                damped = project_capped_simplex(std::move(damped), tier.budget);
                const double v_damped = tier.objective(damped);
                if (v_damped <= v[t]) {
                    next = std::move(damped);
                    v_next = v_damped;
                }
            }
            if (v_next > v[t] + opt.monotonicity_slack * std::max(1.0, std::abs(v[t])))
                throw std::logic_error("DC objective increased between outer iterations");
            p[t] = std::move(next);
            v[t] = v_next;
            out[t].trace.push_back(v_next);
        }
        ++k;
        converged = std::abs(total(v) - before) < opt.threshold;
    }
    for (std::size_t t = 0; t < tiers.size(); ++t) {
        out[t].p = std::move(p[t]);
        out[t].iterations = k;
        out[t].converged = converged;
    }
    return out;
}

inline DcTierSolution solve_dc_tier(const DcTier& tier, std::vector<double> p, const IlOptions& opt = {}) {
    return std::move(solve_dc({&tier}, {std::move(p)}, opt).front());
}

namespace detail {

/// Builds the IL tier objectives. The objective is only DC when the serving
/// distance does not depend on the placement, so a mean nearest-neighbour
/// distance is frozen at the reference placement `start`.
inline std::pair<DcTier, DcTier> il_tiers(const NetworkConfig& cfg, const PopularityProfile& profile,
                                          const ServingDistanceModel& model, const Association& assoc,
                                          const QuadratureSpec& spec, const CachingPolicy& start) {
    const std::size_t L = profile.catalog_size();
    const auto sdm = model.resolved(cfg, L);
    DcTier mm, mu;
    mm.budget = cfg.cache_mm;
    mu.budget = cfg.cache_mu;
    mm.terms.resize(L);
    mu.terms.resize(L);

    std::map<std::pair<double, double>, std::vector<double>> mm_cache, mu_cache;
    const int m_mm = cfg.fading_mm.nakagami_order;
    const int m_mu = cfg.fading_mu.nakagami_order;

    for (std::size_t i = 1; i <= L; ++i) {
        const double f = profile.probability(i);
        const double Q = cfg.sinr_threshold(i);
        if (cfg.cache_mm > 0 && assoc.p_mm > 0.0) {
            const double r = sdm.distance(Tier::MmWave, cfg, start.mm[i - 1]);
            auto& Z = mm_cache[{Q, r}];
            if (Z.empty())
                for (int l = 1; l <= m_mm; ++l)
                    for (LinkState j : kLinkStates) Z.push_back(mm_interference_exponent(Q, l, j, r, cfg, spec));
            for (int l = 1; l <= m_mm; ++l)
                for (std::size_t j = 0; j < 2; ++j) {
                    const double pj = state_probability(kLinkStates[j], r, cfg.blockage);
                    const double w = f * binomial(m_mm, l) * pj * assoc.p_mm;
                    if (w > 0.0) mm.terms[i - 1].push_back({w, cfg.lambda_mm * Z[2 * (l - 1) + j], l % 2 == 1});
                }
        }
        if (cfg.cache_mu > 0 && assoc.p_mu > 0.0) {
            const double r = sdm.distance(Tier::MuWave, cfg, start.mu[i - 1]);
            auto& W = mu_cache[{Q, r}];
            if (W.empty())
                for (int l = 1; l <= m_mu; ++l) W.push_back(mu_interference_exponent(Q, l, r, cfg, spec));
            for (int l = 1; l <= m_mu; ++l) {
                const double w = f * binomial(m_mu, l) * assoc.p_mu;
                mu.terms[i - 1].push_back({w, cfg.lambda_mu * W[l - 1], l % 2 == 1});
            }
        }
    }
    return {std::move(mm), std::move(mu)};
}

}  // namespace detail

/// Algorithm 2: IL caching probabilities for both tiers.
inline OptimizationResult optimize_il(const NetworkConfig& cfg, const PopularityProfile& profile,
                                      const ServingDistanceModel& sdm, const IlOptions& opt = {},
                                      const QuadratureSpec& spec = {}) {
    cfg.validate_for_catalog(profile.catalog_size());
    const std::size_t L = profile.catalog_size();
    const auto assoc = association_probability(cfg, spec);
    const CachingPolicy start{baseline_uc(L, cfg.cache_mm), baseline_uc(L, cfg.cache_mu)};
    const auto [mm_tier, mu_tier] = detail::il_tiers(cfg, profile, sdm, assoc, spec, start);

    const auto sol = solve_dc({&mm_tier, &mu_tier}, {baseline_uc(L, cfg.cache_mm), baseline_uc(L, cfg.cache_mu)}, opt);
    const auto& mm = sol[0];
    const auto& mu = sol[1];

    OptimizationResult r;
    r.policy = {mm.p, mu.p};
    r.objective = -(mm_tier.objective(mm.p) + mu_tier.objective(mu.p));
    r.iterations = mm.iterations;
    for (std::size_t k = 0; k < mm.trace.size(); ++k) r.trace.push_back(mm.trace[k] + mu.trace[k]);
    r.monotone_in_popularity = detail::nonincreasing(mm.p, 1e-9) && detail::nonincreasing(mu.p, 1e-9);
    if (!mm.converged)
        throw OptimizerError("convex-concave procedure did not converge within " +
                                 std::to_string(opt.max_iterations) + " iterations",
                             r);
    return r;
}

}  // namespace mmcache
