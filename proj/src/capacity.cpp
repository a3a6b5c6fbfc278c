#include "ncmimo/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "ncmimo/errors.hpp"

namespace ncmimo
{
namespace
{
void check_snr_nonnegative(double snr)
{
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw DomainError("snr must be finite and nonnegative");
}

void check_antennas(int t, int r)
{
    if (t < 1 || r < 1)
        throw DimensionError("antenna counts must be positive");
}

double geometry(int t, int r)
{
    const double ratio = static_cast<double>(t) / (t + r);
    return ratio * ratio;
}

RegimeParams finish_regime(double snr, double nu, double l)
{
    RegimeParams p;
    p.snr = snr;
    p.nu = nu;
    p.alpha_eff = std::min(1.0, nu);
    p.delta = std::pow(snr, 1.0 - p.alpha_eff);
    p.snr_b = p.alpha_eff >= 1.0 ? snr : std::pow(snr, p.alpha_eff);
    p.coherence = l;
    return p;
}
} // namespace

CapacityBreakdown coherent_expansion(const ChannelDims& dims, double snr)
{
    dims.validate();
    check_snr_nonnegative(snr);
    CapacityBreakdown out;
    out.linear = dims.r * snr;
    out.sublinear = dims.r * (dims.r + dims.t) / (2.0 * dims.t) * snr * snr;
    out.total = out.linear - out.sublinear;
    out.dropped_remainder = "O(snr^3)";
    return out;
}

LowerBound gaussian_lower_bound(const ChannelDims& dims, double snr)
{
    const CapacityBreakdown coherent = coherent_expansion(dims, snr);
    const double tl = static_cast<double>(dims.t) / dims.l;
    const double penalty = dims.r * tl * std::log1p(snr / tl);
    LowerBound out;
    out.value = coherent.total - penalty;
    out.negative = out.value < 0.0;
    return out;
}

RegimeParams regime_from_coherence_length(int t, int r, double l, double snr)
{
    check_antennas(t, r);
    if (!(snr > 0.0 && snr < 1.0))
        throw DomainError("regime map needs snr in (0, 1)");
    if (!(l >= 1.0) || !std::isfinite(l))
        throw DimensionError("coherence length must be >= 1");
    const double scaled = l / geometry(t, r);
    if (scaled <= 1.0)
        throw RegimeError("coherence too short for the parameterization");
    const double nu = std::log(scaled) / (2.0 * std::log(1.0 / snr));
    return finish_regime(snr, nu, l);
}

RegimeParams regime_from_coherence(const ChannelDims& dims, double snr)
{
    dims.validate();
    return regime_from_coherence_length(dims.t, dims.r, dims.l, snr);
}

RegimeParams regime_from_nu(int t, int r, double nu, double snr)
{
    check_antennas(t, r);
    if (!(snr > 0.0 && snr < 1.0))
        throw DomainError("regime map needs snr in (0, 1)");
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw RegimeError("coherence exponent must be positive");
    return finish_regime(snr, nu, geometry(t, r) * std::pow(snr, -2.0 * nu));
}

CoherenceThresholds coherence_thresholds(const ChannelDims& dims, double snr, double alpha, double epsilon)
{
    dims.validate();
    if (!(snr > 0.0 && snr < 1.0))
        throw DomainError("thresholds need snr in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in (0, 1]");
    if (!(epsilon > 0.0 && epsilon < alpha))
        throw DomainError("epsilon must lie in (0, alpha)");
    const double g = geometry(dims.t, dims.r);
    return {g * std::pow(snr, -2.0 * alpha), g * std::pow(snr, -2.0 * (alpha + epsilon))};
}

double sublinear_term(int t, int r, double snr, const SublinearInput& input)
{
    check_antennas(t, r);
    check_snr_nonnegative(snr);
    if (input.alpha.has_value() == input.coherence.has_value())
        throw UsageError("sublinear term needs exactly one of alpha or l");

    auto alpha_form = [&](double alpha) { return r * (r + t) / (2.0 * t) * std::pow(snr, 1.0 + alpha); };

    if (input.alpha)
    {
        const double alpha = *input.alpha;
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw DomainError("alpha must lie in (0, 1]");
        return alpha_form(alpha);
    }
    const double l = *input.coherence;
    if (!(l >= 1.0))
        throw DimensionError("coherence length must be >= 1");
    if (snr == 0.0)
        return 0.0;
    // Beyond this length the penalty saturates at the coherent O(snr^2) value.
    if (l >= geometry(t, r) / (snr * snr))
        return alpha_form(1.0);
    return r * snr / (2.0 * std::sqrt(l));
}

EnergyPerNat energy_per_nat(int r, double snr, double delta_term)
{
    check_antennas(1, r);
    if (!(snr > 0.0))
        throw DomainError("energy per nat needs snr > 0");
    if (!(delta_term >= 0.0))
        throw DomainError("sublinear term must be nonnegative");
    const double linear = r * snr;
    if (delta_term >= linear)
        throw DomainError("sublinear term must be below r*snr (capacity nonpositive)");
    EnergyPerNat out;
    out.ratio = snr / (linear - delta_term);
    out.log_ratio = -std::log(r) - std::log1p(-delta_term / linear);
    out.log_approx = delta_term / linear - std::log(r);
    return out;
}

} // namespace ncmimo
