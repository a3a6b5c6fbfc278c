#include "ncmimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ncmimo/errors.hpp"

namespace ncmimo
{
namespace
{
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Interval
{
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Interval& other) const { return error < other.error; }
};

// Kronrod-15 estimate on [a, b] with the embedded Gauss-7 difference as error.
Interval apply_rule(const std::function<double(double)>& f, double a, double b)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto& nodes = Kronrod::abscissa();
    const auto& kronrod_w = Kronrod::weights();
    const auto& gauss_w = Gauss::weights();

    const double f0 = f(mid);
    double kronrod = f0 * kronrod_w[0];
    double gauss = f0 * gauss_w[0];
    for (std::size_t i = 1; i < nodes.size(); ++i)
    {
        const double pair = f(mid + half * nodes[i]) + f(mid - half * nodes[i]);
        kronrod += pair * kronrod_w[i];
        if (i % 2 == 0)
            gauss += pair * gauss_w[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod);
    return {a, b, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}
} // namespace

QuadratureResult integrate_segments(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                    double rel_tol, double abs_tol, int max_intervals)
{
    if (breakpoints.size() < 2)
        throw DomainError("integration needs at least two breakpoints");
    if (!(rel_tol >= 0.0) || !(abs_tol >= 0.0) || (rel_tol == 0.0 && abs_tol == 0.0))
        throw DomainError("integration tolerance must be positive");

    std::priority_queue<Interval> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b))
            throw DomainError("integration breakpoints must be finite and nondecreasing");
        if (b == a)
            continue;
        const Interval piece = apply_rule(f, a, b);
        value += piece.value;
        error += piece.error;
        heap.push(piece);
    }

    int intervals = static_cast<int>(heap.size());
    auto converged = [&] { return error <= std::max(abs_tol, rel_tol * std::abs(value)); };
    while (!heap.empty() && !converged() && intervals < max_intervals)
    {
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
        {
            // Interval cannot be split further in floating point; keep its contribution.
            heap.push({worst.a, worst.b, worst.value, 0.0});
            error -= worst.error;
            continue;
        }
        const Interval left = apply_rule(f, worst.a, mid);
        const Interval right = apply_rule(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-sum from the leaves to shed accumulated rounding in the running totals.
    double leaf_value = 0.0;
    double leaf_error = 0.0;
    while (!heap.empty())
    {
        leaf_value += heap.top().value;
        leaf_error += heap.top().error;
        heap.pop();
    }
    return {leaf_value, leaf_error, leaf_error <= std::max(abs_tol, rel_tol * std::abs(leaf_value))};
}

} // namespace ncmimo
