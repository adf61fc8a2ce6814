/// @file heuristics.hpp
/// @brief Closed-form gap-size predictors, first-occurrence models and the R(x)
/// predictions built on them, plus the twin-prime constant.
#pragma once

#include "andrica/prime_engine.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace andrica {

namespace constants {

/// Euler-Mascheroni constant (stored, not computed).
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
/// Published value of the twin-prime constant C2.
inline constexpr double twin_prime_reference = 1.32032363169;

} // namespace constants

struct HeuristicConstants
{
    double C2 = constants::twin_prime_reference;
    double c_prime = 0.0;
    double euler_gamma = constants::euler_gamma;
    double granville_coeff = 0.0;

    /// Derives c' = ln C2 and 2 e^-gamma from a value of C2.
    static HeuristicConstants from_twin_constant(double c2)
    {
        HeuristicConstants k;
        k.C2 = c2;
        k.c_prime = std::log(c2);
        k.granville_coeff = 2.0 * std::exp(-k.euler_gamma);
        return k;
    }

    static HeuristicConstants standard() { return from_twin_constant(constants::twin_prime_reference); }
};

struct TwinConstantEstimate
{
    double value = 0.0;
    u64 prime_limit = 0;
    /// Certified bound on |value - C2|.
    double tail_bound = 0.0;
};

/// 2 * prod_{2 < p < prime_limit} (1 - 1/(p-1)^2), accumulated as a sum of logs.
///
/// The omitted factors contribute S = sum_{p >= L} -ln(1 - 1/(p-1)^2) to the log.
/// Using pi(t) < 1.25506 t / ln t (Rosser-Schoenfeld) in a Stieltjes integral,
///   S <= (1 + 1/((L-1)^2 - 1)) * 2.51012 / ln L * (1/(L-1) + 1/(2(L-1)^2)),
/// and |value - C2| = value (1 - e^-S) <= value * S. A rounding allowance for the
/// floating-point sum is added on top.
inline TwinConstantEstimate twin_constant(u64 prime_limit, const SieveOptions& opt = {})
{
    if (prime_limit < 3) {
        throw std::domain_error("twin_constant: prime_limit must be at least 3");
    }
    double log_sum = 0.0;
    double compensation = 0.0;
    u64 terms = 0;
    for_each_prime(3, prime_limit, [&](u64 p) {
        const double m = static_cast<double>(p - 1);
        // Kahan summation; the terms shrink like 1/p^2.
        const double y = std::log1p(-1.0 / (m * m)) - compensation;
        const double t = log_sum + y;
        compensation = (t - log_sum) - y;
        log_sum = t;
        ++terms;
    }, opt);
    TwinConstantEstimate est;
    est.prime_limit = prime_limit;
    est.value = 2.0 * std::exp(log_sum);

    const double L = static_cast<double>(prime_limit);
    const double lm1 = L - 1.0;
    const double log_factor = 1.0 + 1.0 / (lm1 * lm1 - 1.0);
    const double tail_log = log_factor * 2.0 * 1.25506 / std::log(L) * (1.0 / lm1 + 0.5 / (lm1 * lm1));
    const double eps = std::numeric_limits<double>::epsilon();
    const double rounding = est.value * eps * (8.0 + 2.0 * static_cast<double>(terms) * eps + std::abs(log_sum));
    est.tail_bound = est.value * tail_log + rounding;
    return est;
}

// ---------------------------------------------------------------------------
// Maximal-gap models G(x)

/// G(x) from the exact prime count: (x / pi) (2 ln pi - ln x + c').
/// pi_x is real so that approximations of pi can be substituted.
inline double g_wolf(double x, double pi_x, const HeuristicConstants& k = HeuristicConstants::standard())
{
    if (!(pi_x >= 1.0)) {
        throw std::domain_error("g_wolf: pi(x) must be at least 1");
    }
    if (!(x >= 3.0)) {
        throw std::domain_error("g_wolf: x must be at least 3");
    }
    return x / pi_x * (2.0 * std::log(pi_x) - std::log(x) + k.c_prime);
}

/// Which additive constant closes the Gauss-substituted model.
enum class GaussVariant {
    plus_c_prime,     ///< ln x (ln x - 2 ln ln x + c'); consistent with the exact-pi model
    plus_log_c_prime, ///< the alternative reading with ln(c'); comparison only
};

/// G(x) with pi(x) replaced by x / ln x.
inline double g_gauss(double x, const HeuristicConstants& k = HeuristicConstants::standard(),
                      GaussVariant variant = GaussVariant::plus_c_prime)
{
    if (!(x > std::numbers::e)) {
        throw std::domain_error("g_gauss: x must exceed e");
    }
    const double lx = std::log(x);
    const double tail = variant == GaussVariant::plus_c_prime ? k.c_prime : std::log(k.c_prime);
    return lx * (lx - 2.0 * std::log(lx) + tail);
}

/// ln^2 x
inline double g_cramer(double x)
{
    if (!(x >= 1.0)) {
        throw std::domain_error("g_cramer: x must be at least 1");
    }
    const double lx = std::log(x);
    return lx * lx;
}

/// 2 e^-gamma ln^2 p
inline double granville_bound(double p, const HeuristicConstants& k = HeuristicConstants::standard())
{
    if (!(p > 1.0)) {
        throw std::domain_error("granville_bound: p must exceed 1");
    }
    const double lp = std::log(p);
    return k.granville_coeff * lp * lp;
}

enum class GapModelKind { wolf_exact_pi, wolf_gauss, cramer, granville };

inline const char* to_string(GapModelKind kind)
{
    switch (kind) {
    case GapModelKind::wolf_exact_pi: return "wolf_exact_pi";
    case GapModelKind::wolf_gauss: return "wolf_gauss";
    case GapModelKind::cramer: return "cramer";
    case GapModelKind::granville: return "granville";
    }
    return "?";
}

inline std::optional<GapModelKind> gap_model_from_string(std::string_view s)
{
    for (auto kind : {GapModelKind::wolf_exact_pi, GapModelKind::wolf_gauss, GapModelKind::cramer,
                      GapModelKind::granville}) {
        if (s == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

/// A named G(x) predictor bound to a set of constants.
struct GapModel
{
    GapModelKind kind = GapModelKind::wolf_gauss;
    HeuristicConstants constants = HeuristicConstants::standard();
    GaussVariant gauss_variant = GaussVariant::plus_c_prime;

    double operator()(double x, std::optional<double> pi_x = std::nullopt) const
    {
        switch (kind) {
        case GapModelKind::wolf_exact_pi:
            if (!pi_x) {
                throw std::domain_error("wolf_exact_pi model needs pi(x)");
            }
            return g_wolf(x, *pi_x, constants);
        case GapModelKind::wolf_gauss: return g_gauss(x, constants, gauss_variant);
        case GapModelKind::cramer: return g_cramer(x);
        case GapModelKind::granville: return granville_bound(x, constants);
        }
        throw std::logic_error("unknown gap model");
    }
};

// ---------------------------------------------------------------------------
// First-occurrence models and R kernels

/// sqrt(d) e^sqrt(d)
inline double pf_wolf(double d)
{
    if (!(d > 0.0)) {
        throw std::domain_error("pf_wolf: d must be positive");
    }
    const double s = std::sqrt(d);
    return s * std::exp(s);
}

/// e^sqrt(d)
inline double pf_shanks(double d)
{
    if (!(d >= 0.0)) {
        throw std::domain_error("pf_shanks: d must be non-negative");
    }
    return std::exp(std::sqrt(d));
}

/// Leading term of sqrt(pf + d) - sqrt(pf) for pf = sqrt(d) e^sqrt(d):
/// 1/2 d^(3/4) e^(-sqrt(d)/2).
inline double r_kernel(double d)
{
    if (!(d >= 0.0)) {
        throw std::domain_error("r_kernel: d must be non-negative");
    }
    if (d == 0.0) {
        return 0.0;
    }
    return 0.5 * std::pow(d, 0.75) * std::exp(-0.5 * std::sqrt(d));
}

/// Same difference for pf = e^sqrt(d): 1/2 d e^(-sqrt(d)/2).
inline double r_shanks(double d)
{
    if (!(d >= 0.0)) {
        throw std::domain_error("r_shanks: d must be non-negative");
    }
    return 0.5 * d * std::exp(-0.5 * std::sqrt(d));
}

/// r_kernel(ln^2 x) in closed form: ln^(3/2) x / (2 sqrt x).
inline double r_cramer_form(double x)
{
    if (!(x >= 1.0)) {
        throw std::domain_error("r_cramer_form: x must be at least 1");
    }
    const double lx = std::log(x);
    return lx * std::sqrt(lx) / (2.0 * std::sqrt(x));
}

/// R(x) predicted by feeding a gap predictor into the kernel.
template <typename GapFn>
    requires(std::invocable<GapFn, double> && !std::same_as<std::remove_cvref_t<GapFn>, GapModel>)
double r_main(double x, GapFn&& gap)
{
    return r_kernel(static_cast<double>(gap(x)));
}

inline double r_main(double x, const GapModel& model, std::optional<double> pi_x = std::nullopt)
{
    if (model.kind == GapModelKind::wolf_exact_pi && !pi_x) {
        throw std::invalid_argument("r_main: wolf_exact_pi requires pi(x)");
    }
    return r_kernel(model(x, pi_x));
}

enum class KernelKind { r_kernel, r_shanks };

struct KernelMax
{
    double x_star = 0.0;
    double value = 0.0;
};

namespace detail {

// d/dd ln f(d): 3/(4d) - 1/(4 sqrt d) for the main kernel, 1/d - 1/(4 sqrt d) for Shanks.
inline double kernel_log_slope(KernelKind kind, double d)
{
    if (d <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double num = kind == KernelKind::r_kernel ? 0.75 : 1.0;
    return num / d - 0.25 / std::sqrt(d);
}

} // namespace detail

/// Maximizer of the kernel on [lo, hi] by bisection on the sign of its derivative.
/// Both kernels are unimodal on [0, inf), so a boundary is returned when the
/// derivative does not change sign inside the interval.
inline KernelMax kernel_argmax(KernelKind kind, double lo = 0.0, double hi = 100.0)
{
    if (!(lo >= 0.0) || !(hi > lo)) {
        throw std::domain_error("kernel_argmax: need 0 <= lo < hi");
    }
    auto f = [kind](double d) { return kind == KernelKind::r_kernel ? r_kernel(d) : r_shanks(d); };
    if (detail::kernel_log_slope(kind, hi) >= 0.0) {
        return {hi, f(hi)};
    }
    if (detail::kernel_log_slope(kind, lo) <= 0.0) {
        return {lo, f(lo)};
    }
    double a = lo;
    double b = hi;
    for (int i = 0; i < 200 && b - a > 1e-13 * std::max(1.0, b); ++i) {
        const double m = 0.5 * (a + b);
        if (detail::kernel_log_slope(kind, m) > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

} // namespace andrica
