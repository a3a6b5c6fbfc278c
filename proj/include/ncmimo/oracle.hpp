#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "ncmimo/channel.hpp"

namespace ncmimo
{

/// Monte Carlo estimate with a 99% interval. `method` names how the interval was built.
struct OracleEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    double ci99_low = 0.0;
    double ci99_high = 0.0;
    std::string method;

    double half_width() const { return 0.5 * (ci99_high - ci99_low); }
    bool contains(double x) const { return x >= ci99_low && x <= ci99_high; }
};

inline constexpr double kZ99 = 2.5758293035489004;

// All estimators key sample i to rng.substream(i) and reduce in fixed blocks,
// so the result depends on (seed, stream_id, n) only, never on `threads`.

/// E_H log det(I_t + (snr/t) H^H H).
OracleEstimate mc_coherent_mi(const ChannelDims& dims, double snr, std::int64_t n, const RngStream& rng,
                              int threads = 1);

/**
 * -log E_H det(I_t + snr_b/(t(1+rho)) H^H H)^(-rho l). The interval is the
 * delta-method one, replaced by a 200-resample percentile bootstrap when
 * n >= 1e5 and that interval is wider.
 */
OracleEstimate mc_e0_exact(const ChannelDims& dims, double snr_b, double rho, std::int64_t n, const RngStream& rng,
                           int threads = 1);

/// On-off mutual information, stratified over the two input values (n/2 draws each).
OracleEstimate mc_onoff_mi(int r, double snr, double A, std::int64_t n, const RngStream& rng, int threads = 1);

/// Fraction of draws of sum_{i<k} |CN(0,1)|^2 below x, with a Wilson score interval.
OracleEstimate empirical_tail_cdf(int k, double x, std::int64_t n, const RngStream& rng, int threads = 1);

struct SlopeFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; ///< root-mean-square residual
};

/// Ordinary least squares through (x, y) points.
SlopeFit slope_fit(std::span<const std::pair<double, double>> points);

} // namespace ncmimo
