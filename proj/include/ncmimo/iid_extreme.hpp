#pragma once

namespace ncmimo
{

/// On-off input for the single-transmit-antenna i.i.d. fading channel.
struct OnOffSpec
{
    double amplitude_sq = 0.0; ///< A, the on-level power
    double omega = 0.0;        ///< on-probability snr / A
    double divergence = 0.0;   ///< D(on || off) = r (A - log(1 + A))
    double zeta_star = 0.0;    ///< radial point where the two likelihood terms balance
};

OnOffSpec onoff_building_blocks(int r, double snr, double A);

struct OnOffAsymptotic
{
    double value = 0.0;
    /// zeta* / (1 + A); the expansion is only trustworthy when this is small.
    double validity = 0.0;
};

/// Three-term low-SNR expansion of the on-off mutual information (o(snr^2) dropped).
OnOffAsymptotic onoff_mi_asymptotic(int r, double snr, double A);

struct OnOffQuadrature
{
    double value = 0.0;
    double error_estimate = 0.0;
};

/**
 * Exact on-off mutual information through its radial integral representation,
 * evaluated by adaptive Gauss-Kronrod quadrature plus a closed-form tail.
 * Throws NumericError (carrying the estimate) when rel_tol is not reached.
 */
OnOffQuadrature onoff_mi_quadrature(int r, double snr, double A, double rel_tol = 1e-8);

/// M(A, snr) = log(A)/A + A^(-(r+1)/A) snr^(1/A).
double surrogate_M(int r, double snr, double A);

struct MStar
{
    double m_star = 0.0;
    double argmin_A = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

/**
 * Minimum of surrogate_M over [A_lo, A_hi] by golden section. Non-positive
 * bounds select the defaults log(r/snr) and log(r/snr)^3. Throws
 * ConsistencyError if the minimum falls outside its analytic bracket.
 */
MStar m_star(int r, double snr, double A_lo = 0.0, double A_hi = 0.0, double x_tol = 1e-10);

struct CapacitySandwich
{
    double lower = 0.0;
    double upper = 0.0;
    double delta_iid_dot = 0.0; ///< reference scale r snr / log(r/snr), never asserted against
};

CapacitySandwich iid_capacity_bracket(int r, double snr);

} // namespace ncmimo
