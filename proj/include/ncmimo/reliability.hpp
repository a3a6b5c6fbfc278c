#pragma once

#include <span>
#include <string>
#include <vector>

#include "ncmimo/capacity.hpp"
#include "ncmimo/channel.hpp"

namespace ncmimo
{

/// Antenna counts plus the wideband regime; the coherence length lives in regime.coherence.
struct WidebandLink
{
    int t = 1;
    int r = 1;
    RegimeParams regime;
};

WidebandLink link_from_dims(const ChannelDims& dims, double snr);
WidebandLink link_from_nu(int t, int r, double nu, double snr);

/// Coherent upper bound on the Gallager function: rt log(1 + rho l snr_b / (t(1+rho))).
double e0_upper(int t, int r, double l, double snr_b, double rho);
double e0_upper(const ChannelDims& dims, double snr_b, double rho);

struct TrainingDesign
{
    double gamma = 0.0;
    double e_total = 0.0;
    double e_training = 0.0;
    double f_value = 0.0;
};

/// Effective post-training SNR when a fraction gamma of the block energy goes to the pilot.
TrainingDesign training_f(double gamma, int t, double l, double snr_b);
TrainingDesign training_f(double gamma, const ChannelDims& dims, double snr_b);

struct TrainingOptimum
{
    double f_star = 0.0;
    double gamma_star = 0.0;
    double f_lb_asymptotic = 0.0; ///< leading terms only; NaN when no regime is given
};

TrainingOptimum training_f_star(int t, double l, double snr_b, double x_tol = 1e-10);
/// Also fills f_lb_asymptotic from the link's regime.
TrainingOptimum training_f_star(const WidebandLink& link, double x_tol = 1e-10);

struct RhoStar
{
    double rho = 0.0; ///< clipped into [0, 1]
    double raw = 0.0; ///< unclipped closed form (0 when the radicand goes negative)
};

/// Closed-form Gallager parameter. rate == 0 returns 1 by convention.
RhoStar rho_star(const WidebandLink& link, double rate);

struct RateLandmarks
{
    double r_critical = 0.0;  ///< rt/2
    double r_junction = 0.0;  ///< rate where the closed-form rho* reaches 1, rt/(2+q)
    double r_cutoff = 0.0;
    double c_block = 0.0;
    double c_block_training_lb = 0.0;
    bool training_binding = true; ///< false when the training bound sits at or below r_junction
};

RateLandmarks rate_landmarks(const WidebandLink& link);

enum class Region
{
    A,
    B,
    C,
    Beyond
};

const char* region_name(Region region);

struct ExponentValue
{
    double value = 0.0;
    Region region = Region::A;
    double rho = 1.0;
    const char* dropped_remainder = "o(1)";
    bool asymptotics_binding = true;
};

/**
 * Piecewise random coding exponent, in nats per transmitted block. Region A
 * (rho* clipped to 1) is clamped at zero; region C returns exactly 0 since
 * only an o(1) value is known there.
 */
ExponentValue error_exponent(const WidebandLink& link, double rate);

struct ExponentSample
{
    double rate = 0.0;
    double value = 0.0;
    Region region = Region::A;
};

struct ExponentCurve
{
    RateLandmarks landmarks;
    std::vector<ExponentSample> samples;
};

ExponentCurve exponent_curve(const WidebandLink& link, std::span<const double> rates);

struct BlockErrorBound
{
    double bound = 0.0;
    double exponent = 0.0;
    double delta = 1.0;
    Region region = Region::A;
    bool in_unit_range = true;
};

/// delta(snr) * exp(-E_r(rate)), returned unclamped.
BlockErrorBound block_error_bound(const WidebandLink& link, double rate);

struct OutageResult
{
    double probability = 0.0;
    double delta_times_outage = 0.0;
    double f_star = 0.0;
};

/// P(chi2_rt < rate / (l f*)), with f* from numeric maximization over the training split.
OutageResult outage_probability(const WidebandLink& link, double rate);

struct DiversityResult
{
    double closed_form = 0.0;
    double slope_bound = 0.0;   ///< slope of log block_error_bound vs log snr
    double slope_outage = 0.0;  ///< same for log(delta * outage)
    double residual_bound = 0.0;
    double residual_outage = 0.0;
};

/// d_L = rt(kappa - min(1,nu)) + 1 - min(1,nu); kappa must lie in (min(1,nu), 2 nu).
double diversity_closed_form(int t, int r, double nu, double kappa);

/**
 * Closed form plus empirical slopes at R = l r snr^kappa over snr_grid. An
 * empty grid skips the fit.
 */
DiversityResult diversity_low_snr(int t, int r, double nu, double kappa, std::span<const double> snr_grid = {});

} // namespace ncmimo
