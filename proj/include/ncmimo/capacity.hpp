#pragma once

#include <optional>

#include "ncmimo/channel.hpp"

namespace ncmimo
{

/// Wideband regime quantities derived from the coherence length.
struct RegimeParams
{
    double snr = 0.0;
    double nu = 0.0;        ///< coherence exponent in l = t^2/(r+t)^2 * snr^(-2 nu)
    double alpha_eff = 0.0; ///< min(1, nu)
    double delta = 1.0;     ///< duty fraction snr^(1 - alpha_eff)
    double snr_b = 0.0;     ///< in-block SNR, snr / delta = snr^alpha_eff
    double coherence = 0.0; ///< l as a real number
};

/**
 * r*SNR minus the sublinear penalty. `dropped_remainder` names the order of the
 * term left out of `sublinear`; callers budget slack for it.
 */
struct CapacityBreakdown
{
    double linear = 0.0;
    double sublinear = 0.0;
    double total = 0.0;
    const char* dropped_remainder = "";
};

/// Second-order low-SNR expansion of the coherent MIMO mutual information (O(SNR^3) dropped).
CapacityBreakdown coherent_expansion(const ChannelDims& dims, double snr);

struct LowerBound
{
    double value = 0.0;
    bool negative = false;
};

/// Peaky-Gaussian lower bound: coherent expansion minus r(t/l)log(1 + l snr/t).
LowerBound gaussian_lower_bound(const ChannelDims& dims, double snr);

/// Inverts l = t^2/(r+t)^2 snr^(-2 nu) for nu. Requires snr in (0,1).
RegimeParams regime_from_coherence(const ChannelDims& dims, double snr);
RegimeParams regime_from_coherence_length(int t, int r, double l, double snr);
/// Forward map: fixes nu and derives the (real) coherence length.
RegimeParams regime_from_nu(int t, int r, double nu, double snr);

struct CoherenceThresholds
{
    double l_min = 0.0;
    double l_gaussian = 0.0;
};

/// Converse threshold t^2/(r+t)^2 snr^(-2 alpha) and the Peaky Gaussian one at alpha + epsilon.
CoherenceThresholds coherence_thresholds(const ChannelDims& dims, double snr, double alpha, double epsilon);

struct SublinearInput
{
    std::optional<double> alpha;
    std::optional<double> coherence;
};

/**
 * Leading sublinear term. With alpha: r(r+t)/(2t) snr^(1+alpha). With l:
 * r snr/(2 sqrt(l)), except that once l >= t^2/(t+r)^2 snr^-2 the alpha = 1
 * form is used. Exactly one of the two must be set.
 */
double sublinear_term(int t, int r, double snr, const SublinearInput& input);

struct EnergyPerNat
{
    double ratio = 0.0;
    double log_ratio = 0.0;
    double log_approx = 0.0;
};

EnergyPerNat energy_per_nat(int r, double snr, double delta_term);

} // namespace ncmimo
