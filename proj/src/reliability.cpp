#include "ncmimo/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "ncmimo/errors.hpp"
#include "ncmimo/numerics.hpp"
#include "ncmimo/oracle.hpp"
#include "ncmimo/special.hpp"

namespace ncmimo
{
namespace
{
void check_rho(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw DomainError("rho must lie in [0, 1]");
}

void check_rate(double rate)
{
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw DomainError("rate must be finite and nonnegative");
}

void check_training(int t, double l)
{
    if (t < 1)
        throw DimensionError("transmit antenna count must be positive");
    if (!(l > t))
        throw TrainingInfeasibleError("training needs l > t");
}

// Effective block SNR t snr^-(2 nu - alpha) / (t+r)^2 = l snr_b / t; q is its reciprocal.
double block_gain(const WidebandLink& link)
{
    const auto& g = link.regime;
    const double tr = link.t + link.r;
    return link.t * std::pow(g.snr, -(2.0 * g.nu - g.alpha_eff)) / (tr * tr);
}
} // namespace

WidebandLink link_from_dims(const ChannelDims& dims, double snr)
{
    return {dims.t, dims.r, regime_from_coherence(dims, snr)};
}

WidebandLink link_from_nu(int t, int r, double nu, double snr) { return {t, r, regime_from_nu(t, r, nu, snr)}; }

double e0_upper(int t, int r, double l, double snr_b, double rho)
{
    if (t < 1 || r < 1 || !(l >= 1.0))
        throw DimensionError("channel dims must be positive");
    check_rho(rho);
    if (!(snr_b > 0.0))
        throw DomainError("in-block SNR must be positive");
    return r * t * std::log1p(rho * l * snr_b / (t * (1.0 + rho)));
}

double e0_upper(const ChannelDims& dims, double snr_b, double rho)
{
    dims.validate();
    return e0_upper(dims.t, dims.r, dims.l, snr_b, rho);
}

TrainingDesign training_f(double gamma, int t, double l, double snr_b)
{
    check_training(t, l);
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("training fraction must lie in (0, 1)");
    if (!(snr_b > 0.0))
        throw DomainError("in-block SNR must be positive");
    const double e_total = l * snr_b;
    const double pilot = gamma * e_total;
    const double data_snr = (1.0 - gamma) * e_total / (l - t);
    const double estimate_quality = pilot / (t + pilot);
    const double estimation_noise = t * data_snr / (t + pilot);
    TrainingDesign d;
    d.gamma = gamma;
    d.e_total = e_total;
    d.e_training = pilot;
    d.f_value = estimate_quality * data_snr / (estimation_noise + 1.0);
    return d;
}

TrainingDesign training_f(double gamma, const ChannelDims& dims, double snr_b)
{
    dims.validate();
    return training_f(gamma, dims.t, dims.l, snr_b);
}

TrainingOptimum training_f_star(int t, double l, double snr_b, double x_tol)
{
    check_training(t, l);
    if (!(snr_b > 0.0))
        throw DomainError("in-block SNR must be positive");
    constexpr double edge = 1e-12;
    const auto best = golden_section_maximize([&](double g) { return training_f(g, t, l, snr_b).f_value; }, edge,
                                              1.0 - edge, x_tol);
    return {best.value, best.x, std::numeric_limits<double>::quiet_NaN()};
}

TrainingOptimum training_f_star(const WidebandLink& link, double x_tol)
{
    const auto& g = link.regime;
    TrainingOptimum out = training_f_star(link.t, g.coherence, g.snr_b, x_tol);
    out.f_lb_asymptotic = std::pow(g.snr, g.alpha_eff) -
                          2.0 * (link.t + link.r) / std::sqrt(link.t) * std::pow(g.snr, g.nu + 0.5 * g.alpha_eff);
    return out;
}

RhoStar rho_star(const WidebandLink& link, double rate)
{
    check_rate(rate);
    if (rate == 0.0)
        return {1.0, std::numeric_limits<double>::infinity()};
    const double q = 1.0 / block_gain(link);
    const double radicand = link.r * link.t / rate - q;
    if (radicand < 0.0)
        return {0.0, 0.0};
    const double raw = 0.5 * (std::sqrt(1.0 + 4.0 * radicand) - 1.0);
    return {std::min(raw, 1.0), raw};
}

RateLandmarks rate_landmarks(const WidebandLink& link)
{
    const auto& g = link.regime;
    const double rt = link.r * link.t;
    const double a = g.alpha_eff;
    const double K = block_gain(link);
    const double coherent_penalty = link.r * (link.r + link.t) / (2.0 * link.t) * std::pow(g.snr, 2.0 * a);
    const double training_penalty =
        2.0 * link.r * (link.r + link.t) / std::sqrt(link.t) * std::pow(g.snr, g.nu + 0.5 * a);

    RateLandmarks lm;
    lm.r_critical = 0.5 * rt;
    lm.r_junction = rt / (2.0 + 1.0 / K);
    lm.r_cutoff = rt * std::log1p(0.5 * K);
    lm.c_block = g.coherence * (link.r * std::pow(g.snr, a) - coherent_penalty);
    lm.c_block_training_lb = g.coherence * (link.r * std::pow(g.snr, a) - training_penalty - coherent_penalty);
    lm.training_binding = lm.c_block_training_lb > lm.r_junction;
    return lm;
}

const char* region_name(Region region)
{
    switch (region)
    {
    case Region::A:
        return "A";
    case Region::B:
        return "B";
    case Region::C:
        return "C";
    case Region::Beyond:
        return "beyond";
    }
    return "?";
}

ExponentValue error_exponent(const WidebandLink& link, double rate)
{
    check_rate(rate);
    const RateLandmarks lm = rate_landmarks(link);
    const double rt = link.r * link.t;
    const double K = block_gain(link);

    ExponentValue out;
    out.asymptotics_binding = lm.training_binding;
    if (rate >= lm.c_block)
    {
        out.region = Region::Beyond;
        out.rho = 0.0;
        return out;
    }
    const RhoStar rho = rho_star(link, rate);
    // Region A is where the closed-form rho* saturates; without a binding training bound it runs up to c_block.
    if (rho.raw >= 1.0 || !lm.training_binding)
    {
        out.region = Region::A;
        out.rho = 1.0;
        out.value = std::max(0.0, lm.r_cutoff - rate);
        return out;
    }
    if (rate >= lm.c_block_training_lb)
    {
        out.region = Region::C;
        out.rho = rho.rho;
        return out;
    }
    out.region = Region::B;
    out.rho = rho.rho;
    out.value = rt * std::log1p(rho.rho * K / (1.0 + rho.rho)) - rho.rho * rate;
    return out;
}

ExponentCurve exponent_curve(const WidebandLink& link, std::span<const double> rates)
{
    ExponentCurve curve;
    curve.landmarks = rate_landmarks(link);
    curve.samples.reserve(rates.size());
    for (double rate : rates)
    {
        const auto e = error_exponent(link, rate);
        curve.samples.push_back({rate, e.value, e.region});
    }
    return curve;
}

BlockErrorBound block_error_bound(const WidebandLink& link, double rate)
{
    const auto e = error_exponent(link, rate);
    BlockErrorBound out;
    out.exponent = e.value;
    out.region = e.region;
    out.delta = link.regime.delta;
    out.bound = out.delta * std::exp(-e.value);
    out.in_unit_range = out.bound >= 0.0 && out.bound <= 1.0;
    return out;
}

OutageResult outage_probability(const WidebandLink& link, double rate)
{
    check_rate(rate);
    const double l = link.regime.coherence;
    const auto opt = training_f_star(link.t, l, link.regime.snr_b);
    OutageResult out;
    out.f_star = opt.f_star;
    out.probability = gamma_lower_regularized(link.r * link.t, rate / (l * opt.f_star));
    out.delta_times_outage = link.regime.delta * out.probability;
    return out;
}

double diversity_closed_form(int t, int r, double nu, double kappa)
{
    if (t < 1 || r < 1)
        throw DimensionError("antenna counts must be positive");
    if (!(nu > 0.0))
        throw DomainError("nu must be positive");
    const double a = std::min(1.0, nu);
    if (!(kappa > a && kappa < 2.0 * nu))
        throw DomainError("kappa must lie in (min(1,nu), 2 nu) for the rate to sit in region B");
    return r * t * (kappa - a) + 1.0 - a;
}

DiversityResult diversity_low_snr(int t, int r, double nu, double kappa, std::span<const double> snr_grid)
{
    DiversityResult out;
    out.closed_form = diversity_closed_form(t, r, nu, kappa);
    if (snr_grid.empty())
        return out;

    std::vector<std::pair<double, double>> bound_points;
    std::vector<std::pair<double, double>> outage_points;
    for (double snr : snr_grid)
    {
        const WidebandLink link = link_from_nu(t, r, nu, snr);
        const double rate = link.regime.coherence * r * std::pow(snr, kappa);
        const double x = std::log(snr);
        bound_points.emplace_back(x, std::log(block_error_bound(link, rate).bound));
        outage_points.emplace_back(x, std::log(outage_probability(link, rate).delta_times_outage));
    }
    const auto fb = slope_fit(bound_points);
    const auto fo = slope_fit(outage_points);
    out.slope_bound = fb.slope;
    out.residual_bound = fb.residual;
    out.slope_outage = fo.slope;
    out.residual_outage = fo.residual;
    return out;
}

} // namespace ncmimo
