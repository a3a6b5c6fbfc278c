#pragma once

#include <cmath>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace ncmimo
{

struct ScalarOptimum
{
    double x;
    double value;
};

/**
 * Golden-section minimization of a unimodal f on [lo, hi], stopped once the
 * bracket is narrower than x_tol. The endpoints are compared against the
 * interior estimate, so a minimum sitting on the boundary is returned exactly.
 */
template <class F>
ScalarOptimum golden_section_minimize(F&& f, double lo, double hi, double x_tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol)
    {
        if (fc < fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    ScalarOptimum best{0.5 * (a + b), f(0.5 * (a + b))};
    for (double edge : {lo, hi})
    {
        const double fe = f(edge);
        if (fe < best.value)
            best = {edge, fe};
    }
    return best;
}

template <class F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double x_tol)
{
    auto result = golden_section_minimize([&](double x) { return -f(x); }, lo, hi, x_tol);
    result.value = -result.value;
    return result;
}

struct QuadratureResult
{
    double value;
    double error_estimate;
    bool converged;
};

/**
 * Globally adaptive Gauss-Kronrod (7/15) integration of f over the segments
 * [b_0, b_1], [b_1, b_2], ... The interval with the largest |K15 - G7| is
 * bisected until the summed error estimate is at most
 * max(abs_tol, rel_tol * |value|) or max_intervals is reached; `converged`
 * reports which.
 */
QuadratureResult integrate_segments(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                    double rel_tol, double abs_tol = 0.0, int max_intervals = 4000);

} // namespace ncmimo
