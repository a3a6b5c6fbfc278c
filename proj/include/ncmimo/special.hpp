#pragma once

namespace ncmimo
{

/**
 * Regularized lower incomplete gamma P(k, x) for integer shape k >= 1.
 *
 * P(k, x) is the CDF at x of a sum of k independent unit-mean exponentials,
 * i.e. of trace(H^H H) for an r x t CN(0,1) matrix with rt = k. Evaluated by
 * the power series for x < k + 1 and by the Lentz continued fraction for the
 * complement otherwise; relative accuracy ~1e-12 or better.
 *
 * Throws DomainError for k < 1 or x < 0.
 */
double gamma_lower_regularized(int k, double x);

/// Q(k, x) = 1 - P(k, x), computed without cancellation in the upper tail.
double gamma_upper_regularized(int k, double x);

} // namespace ncmimo
