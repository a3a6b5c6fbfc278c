#include "ncmimo/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ncmimo/errors.hpp"

namespace ncmimo
{
namespace
{
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10000;

void check_args(int k, double x)
{
    if (k < 1)
        throw DomainError("gamma shape must be a positive integer, got " + std::to_string(k));
    if (!(x >= 0.0))
        throw DomainError("gamma argument must be nonnegative");
}

// log of x^k e^{-x} / Gamma(k), the common prefactor of both expansions.
double log_prefactor(int k, double x) { return k * std::log(x) - x - std::lgamma(static_cast<double>(k)); }

// P(k, x) by the series sum_n x^n / (k (k+1) ... (k+n)).
double lower_series(int k, double x)
{
    double term = 1.0 / k;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n)
    {
        term *= x / (k + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            break;
    }
    return sum * std::exp(log_prefactor(k, x));
}

// Q(k, x) by the modified Lentz continued fraction.
double upper_continued_fraction(int k, double x)
{
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - k;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i)
    {
        const double an = -i * (i - static_cast<double>(k));
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps)
            break;
    }
    return std::exp(log_prefactor(k, x)) * h;
}
} // namespace

double gamma_lower_regularized(int k, double x)
{
    check_args(k, x);
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    if (x < k + 1.0)
        return lower_series(k, x);
    return 1.0 - upper_continued_fraction(k, x);
}

double gamma_upper_regularized(int k, double x)
{
    check_args(k, x);
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    if (x < k + 1.0)
        return 1.0 - lower_series(k, x);
    return upper_continued_fraction(k, x);
}

} // namespace ncmimo
