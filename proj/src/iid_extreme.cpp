#include "ncmimo/iid_extreme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ncmimo/errors.hpp"
#include "ncmimo/numerics.hpp"
#include "ncmimo/special.hpp"

namespace ncmimo
{
namespace
{
void check_receivers(int r)
{
    if (r < 1)
        throw DimensionError("receive antenna count must be positive");
}

// log(r/snr) with the loglog > 0 requirement shared by the sandwich quantities.
double log_ratio_checked(int r, double snr)
{
    check_receivers(r);
    if (!(snr > 0.0))
        throw DomainError("snr must be positive");
    const double L = std::log(r / snr);
    if (!(L > 2.0))
        throw DomainError("snr too large: need snr < r/e^2 so that loglog(r/snr) > 0");
    return L;
}

// log(1 + e^u) without overflow.
double softplus(double u) { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }
} // namespace

OnOffSpec onoff_building_blocks(int r, double snr, double A)
{
    check_receivers(r);
    if (!(snr > 0.0))
        throw DomainError("snr must be positive");
    if (!(A >= snr) || !std::isfinite(A))
        throw DomainError("on-level A must be at least snr (omega <= 1)");
    OnOffSpec s;
    s.amplitude_sq = A;
    s.omega = snr / A;
    s.divergence = r * (A - std::log1p(A));
    s.zeta_star = (1.0 + A) * (std::log(A) + r * std::log1p(A) + std::log(1.0 / snr)) / A;
    return s;
}

OnOffAsymptotic onoff_mi_asymptotic(int r, double snr, double A)
{
    check_receivers(r);
    if (!(A >= 1.0))
        throw DomainError("asymptotic on-off expression needs A >= 1");
    if (!(snr >= 0.0 && snr < 1.0))
        throw DomainError("asymptotic on-off expression needs snr in [0, 1)");
    if (snr == 0.0)
        return {0.0, std::numeric_limits<double>::infinity()};
    const double third = r * std::pow(A, -(r + 1.0) / A) * std::pow(snr, 1.0 + 1.0 / A);
    OnOffAsymptotic out;
    out.value = r * snr - r * snr * std::log1p(A) / A - third;
    out.validity = onoff_building_blocks(r, snr, A).zeta_star / (1.0 + A);
    return out;
}

OnOffQuadrature onoff_mi_quadrature(int r, double snr, double A, double rel_tol)
{
    check_receivers(r);
    if (!(snr > 0.0 && A > snr) || !std::isfinite(A))
        throw DomainError("quadrature needs A > snr > 0");
    if (!(rel_tol > 0.0))
        throw DomainError("rel_tol must be positive");

    const double omega = snr / A;
    const double scale = 1.0 + A;
    const double slope = A / scale;
    // log of the likelihood ratio term is softplus(u0 + slope * zeta).
    const double u0 = std::log(omega) - std::log1p(-omega) - r * std::log1p(A);
    const double kink = std::max(0.0, -u0 / slope);
    const double cut = kink + 40.0 * scale;
    const double log_fact = std::lgamma(static_cast<double>(r));

    // Radial densities of ||y||^2 with the input off and on.
    auto log_power = [&](double z) { return r == 1 ? 0.0 : (r - 1) * std::log(z); };
    auto weight_off = [&](double z) { return std::exp(log_power(z) - z - log_fact); };
    auto weight_on = [&](double z) { return std::exp(log_power(z) - z / scale - log_fact - r * std::log(scale)); };
    auto u = [&](double z) { return u0 + slope * z; };

    const double leading = r * snr - r * snr * std::log1p(A) / A - std::log1p(-omega);
    const std::array<double, 3> pts{0.0, kink, cut};

    // Past `cut` softplus(u) = u + O(e^-u); the linear part integrates in closed form.
    auto linear_tail = [&](double x, double spread) {
        return u0 * gamma_upper_regularized(r, x) + slope * spread * r * gamma_upper_regularized(r + 1, x);
    };
    const double tail_off = linear_tail(cut, 1.0);
    const double tail_on = linear_tail(cut / scale, scale);

    // Both integrals get an absolute target sized from a guess of the answer. The
    // asymptotic form can overshoot badly at large A, so a miss is retried with the
    // estimate it produced.
    double magnitude = std::max(std::abs(onoff_mi_asymptotic(r, snr, std::max(A, 1.0)).value), 1e-300);
    OnOffQuadrature out;
    bool ok = false;
    for (int attempt = 0; attempt < 3 && !ok; ++attempt)
    {
        const double abs_target = 0.25 * rel_tol * magnitude;
        const auto q_off = integrate_segments([&](double z) { return weight_off(z) * softplus(u(z)); },
                                              std::span<const double>(pts), 0.0, abs_target / (1.0 - omega));
        const auto q_on =
            integrate_segments([&](double z) { return weight_on(z) * softplus(u(z)); },
                               std::span<const double>(pts), 0.0, abs_target / omega);
        const double i1 = (1.0 - omega) * (q_off.value + tail_off);
        const double i2 = omega * (q_on.value + tail_on);
        out.value = leading - i1 - i2;
        out.error_estimate =
            (1.0 - omega) * q_off.error_estimate + omega * q_on.error_estimate +
            64.0 * std::numeric_limits<double>::epsilon() * (std::abs(leading) + std::abs(i1) + std::abs(i2));
        ok = q_off.converged && q_on.converged && out.error_estimate <= rel_tol * std::abs(out.value);
        magnitude = std::max(0.5 * std::abs(out.value), 1e-300);
    }
    if (!ok)
        throw NumericError("on-off quadrature did not reach the requested tolerance", out.value, out.error_estimate);
    return out;
}

double surrogate_M(int r, double snr, double A)
{
    check_receivers(r);
    if (!(A > 1.0))
        throw DomainError("surrogate M needs A > 1");
    if (!(snr > 0.0))
        throw DomainError("snr must be positive");
    return std::log(A) / A + std::exp((-(r + 1.0) * std::log(A) + std::log(snr)) / A);
}

MStar m_star(int r, double snr, double A_lo, double A_hi, double x_tol)
{
    const double L = log_ratio_checked(r, snr);
    const double lo = A_lo > 0.0 ? A_lo : L;
    const double hi = A_hi > 0.0 ? A_hi : L * L * L;
    if (!(lo > 1.0) || !(hi > lo))
        throw DomainError("A search domain must satisfy 1 < A_lo < A_hi");
    if (!(x_tol > 0.0))
        throw DomainError("x_tol must be positive");

    const auto best = golden_section_minimize([&](double A) { return surrogate_M(r, snr, A); }, lo, hi, x_tol);
    const double loglog = std::log(L);
    MStar out;
    out.m_star = best.value;
    out.argmin_A = best.x;
    out.lower_bound = loglog / L;
    out.upper_bound = (loglog * loglog + 1.0) / L;
    if (out.m_star < out.lower_bound || out.m_star > out.upper_bound)
        throw ConsistencyError("minimum of M lies outside its analytic bracket; check the A search domain");
    return out;
}

CapacitySandwich iid_capacity_bracket(int r, double snr)
{
    const double L = log_ratio_checked(r, snr);
    const double loglog = std::log(L);
    const double linear = r * snr;
    CapacitySandwich out;
    out.lower = linear - linear * (loglog * loglog + 1.0) / L;
    out.upper = linear - linear * loglog / L;
    out.delta_iid_dot = linear / L;
    return out;
}

} // namespace ncmimo
