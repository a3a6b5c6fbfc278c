#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncmimo/capacity.hpp"
#include "ncmimo/errors.hpp"

using namespace ncmimo;

TEST_CASE("coherent expansion")
{
    CHECK(coherent_expansion({1, 1, 1}, 0.0).total == 0.0);
    const auto c = coherent_expansion({2, 2, 1}, 0.1);
    CHECK(c.linear == doctest::Approx(0.2));
    CHECK(c.sublinear == doctest::Approx(0.02));
    CHECK(c.total == doctest::Approx(0.18));
    CHECK(c.total == c.linear - c.sublinear);
    CHECK(std::string(c.dropped_remainder) == "O(snr^3)");
    CHECK(coherent_expansion({1, 1, 1}, 0.01).total == doctest::Approx(0.0099));
    CHECK_THROWS_AS(coherent_expansion({1, 1, 1}, -0.1), DomainError);
}

TEST_CASE("Gaussian lower bound")
{
    CHECK(gaussian_lower_bound({1, 1, 7}, 0.0).value == 0.0);
    CHECK(gaussian_lower_bound({1, 1, 1000}, 0.1).value == doctest::Approx(0.0853848794831587).epsilon(1e-13));
    CHECK(gaussian_lower_bound({1, 1, 10}, 0.1).value == doctest::Approx(0.0206852819440055).epsilon(1e-12));
    CHECK(gaussian_lower_bound({1, 1, 1}, 0.5).negative);

    for (int t = 1; t <= 3; ++t)
        for (int r = 1; r <= 3; ++r)
            for (double snr : {0.3, 0.05, 0.001})
            {
                double prev = -INFINITY;
                for (int l = 1; l <= 5000; l = l * 3 / 2 + 1)
                {
                    const double v = gaussian_lower_bound({t, r, l}, snr).value;
                    CHECK(v >= prev);
                    CHECK(v <= coherent_expansion({t, r, l}, snr).total);
                    prev = v;
                }
            }
}

TEST_CASE("regime from coherence length")
{
    const auto a = regime_from_coherence({2, 2, 25}, 0.1);
    CHECK(a.nu == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.delta == doctest::Approx(1.0));
    CHECK(a.snr_b == doctest::Approx(0.1));

    const auto b = regime_from_coherence({1, 1, 10}, 0.1);
    CHECK(b.nu == doctest::Approx(0.801029995663981).epsilon(1e-13));
    CHECK(b.delta == doctest::Approx(0.632455532033676).epsilon(1e-13));
    CHECK(b.snr_b == doctest::Approx(0.158113883008419).epsilon(1e-13));
    CHECK(b.delta * b.snr_b == doctest::Approx(0.1).epsilon(1e-14));

    const auto c = regime_from_coherence({1, 1, 100}, 0.1);
    CHECK(c.nu == doctest::Approx(1.30102999566398).epsilon(1e-13));
    CHECK(c.alpha_eff == 1.0);
    CHECK(c.delta == 1.0);
    CHECK(c.snr_b == doctest::Approx(0.1));

    CHECK_THROWS_AS(regime_from_coherence({1, 1, 10}, 1.5), DomainError);
    CHECK_THROWS_AS(regime_from_coherence_length(4, 1, 0.5, 0.1), DimensionError);
    CHECK_THROWS_AS(regime_from_nu(1, 1, 0.0, 0.1), RegimeError);
}

TEST_CASE("regime invariants")
{
    for (int t = 1; t <= 4; ++t)
        for (int r = 1; r <= 4; ++r)
            for (int l : {1, 3, 50, 2500, 10000})
                for (double snr : {0.5, 0.01, 1e-4})
                {
                    const auto g = regime_from_coherence({t, r, l}, snr);
                    CHECK(g.nu > 0.0);
                    CHECK(g.alpha_eff == std::min(1.0, g.nu));
                    CHECK(g.delta > 0.0);
                    CHECK(g.delta <= 1.0);
                    CHECK((g.delta == 1.0) == (g.nu >= 1.0));
                    CHECK(std::abs(g.delta * g.snr_b - snr) <= 1e-12 * snr);
                    CHECK(std::abs(regime_from_nu(t, r, g.nu, snr).coherence - l) <= 1e-9 * l);
                }
}

TEST_CASE("coherence thresholds")
{
    const auto th = coherence_thresholds({2, 2, 1}, 0.1, 1.0, 0.5);
    CHECK(th.l_min == doctest::Approx(25.0).epsilon(1e-13));
    CHECK(th.l_gaussian == doctest::Approx(250.0).epsilon(1e-13));

    double prev = 0.0;
    for (double alpha = 0.1; alpha <= 1.0; alpha += 0.1)
    {
        const double l = coherence_thresholds({1, 2, 1}, 0.01, alpha, alpha / 2).l_min;
        CHECK(l > prev);
        prev = l;
    }
    CHECK(coherence_thresholds({1, 2, 1}, 0.001, 0.5, 0.1).l_min > coherence_thresholds({1, 2, 1}, 0.01, 0.5, 0.1).l_min);

    CHECK_THROWS_AS(coherence_thresholds({1, 1, 1}, 0.1, 0.0, 0.1), DomainError);
    CHECK_THROWS_AS(coherence_thresholds({1, 1, 1}, 0.1, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(coherence_thresholds({1, 1, 1}, 0.1, 1.2, 0.1), DomainError);
}

TEST_CASE("sublinear term")
{
    CHECK(sublinear_term(1, 1, 0.01, {0.5, {}}) == doctest::Approx(0.001).epsilon(1e-13));
    CHECK(sublinear_term(1, 2, 0.01, {{}, 400.0}) == doctest::Approx(5e-4).epsilon(1e-13));
    CHECK(sublinear_term(1, 1, 0.0, {0.5, {}}) == 0.0);
    CHECK(sublinear_term(1, 1, 0.0, {{}, 10.0}) == 0.0);

    for (int t = 1; t <= 3; ++t)
        for (int r = 1; r <= 3; ++r)
            CHECK(sublinear_term(t, r, 0.03, {1.0, {}}) ==
                  doctest::Approx(coherent_expansion({t, r, 1}, 0.03).sublinear).epsilon(1e-14));

    // Past t^2/(t+r)^2 snr^-2 the l form saturates at the alpha = 1 value.
    const double long_l = 1e9;
    CHECK(sublinear_term(2, 2, 0.01, {{}, long_l}) == sublinear_term(2, 2, 0.01, {1.0, {}}));

    CHECK_THROWS_AS(sublinear_term(1, 1, 0.01, {}), UsageError);
    CHECK_THROWS_AS(sublinear_term(1, 1, 0.01, {0.5, 100.0}), UsageError);
}

TEST_CASE("energy per nat")
{
    const auto ideal = energy_per_nat(1, 0.01, 0.0);
    CHECK(ideal.ratio == 1.0);
    CHECK(ideal.log_ratio == 0.0);

    const auto e = energy_per_nat(2, 0.01, 0.002);
    CHECK(e.ratio == doctest::Approx(5.0 / 9.0).epsilon(1e-13));
    CHECK(e.log_ratio == doctest::Approx(-0.587786664902119).epsilon(1e-13));
    CHECK(e.log_approx == doctest::Approx(-0.593147180559945).epsilon(1e-13));

    CHECK(std::abs(energy_per_nat(3, 0.01, 1e-12).log_ratio + std::log(3.0)) < 1e-9);
    CHECK_THROWS_AS(energy_per_nat(2, 0.01, 0.02), DomainError);
}
