#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "ncmimo/capacity.hpp"
#include "ncmimo/errors.hpp"
#include "ncmimo/iid_extreme.hpp"
#include "ncmimo/oracle.hpp"
#include "ncmimo/reliability.hpp"
#include "ncmimo/special.hpp"

using namespace ncmimo;

TEST_CASE("degenerate oracles are exact")
{
    const RngStream rng(1, 0);
    const auto zero_snr = mc_coherent_mi({2, 2, 1}, 0.0, 1000, rng);
    CHECK(zero_snr.mean == 0.0);
    CHECK(zero_snr.std_error == 0.0);

    const auto zero_rho = mc_e0_exact({2, 2, 5}, 0.3, 0.0, 1000, rng);
    CHECK(zero_rho.mean == 0.0);
    CHECK(zero_rho.ci99_low == 0.0);
    CHECK(zero_rho.ci99_high == 0.0);

    const auto silent = mc_onoff_mi(1, 0.0, 10.0, 10000, rng);
    CHECK(silent.mean == 0.0);
    CHECK(silent.std_error == 0.0);

    CHECK(empirical_tail_cdf(3, 0.0, 1000, rng).mean == 0.0);
    CHECK_THROWS_AS(mc_coherent_mi({1, 1, 1}, 0.1, 999, rng), DomainError);
}

TEST_CASE("coherent MI oracle")
{
    const auto est = mc_coherent_mi({1, 1, 1}, 0.01, 1000000, RngStream(2, 0));
    CHECK(std::abs(est.mean - coherent_expansion({1, 1, 1}, 0.01).total) <= est.half_width() + 10e-6);
    CHECK(est.half_width() == doctest::Approx(kZ99 * est.std_error));
    CHECK(est.ci99_low <= est.mean);
    CHECK(est.mean <= est.ci99_high);
}

TEST_CASE("Gallager function oracle")
{
    const auto est = mc_e0_exact({1, 1, 1}, 2.0, 1.0, 200000, RngStream(3, 0));
    CHECK(est.contains(0.516931959002046));
    CHECK(est.ci99_low <= est.mean);
    CHECK(est.mean <= est.ci99_high);

    for (int l : {1, 8})
        for (double rho : {0.25, 1.0})
        {
            const auto e = mc_e0_exact({2, 1, l}, 0.2, rho, 20000, RngStream(4, l));
            CHECK(e.mean <= e0_upper({2, 1, l}, 0.2, rho) + 3.0 * e.half_width());
        }
}

TEST_CASE("on-off oracle agrees with quadrature")
{
    const auto mc = mc_onoff_mi(1, 0.01, 10.0, 1000000, RngStream(5, 0));
    CHECK(mc.contains(onoff_mi_quadrature(1, 0.01, 10.0).value));
}

TEST_CASE("chi-square tail oracle")
{
    const auto est = empirical_tail_cdf(4, 1.0, 1000000, RngStream(6, 0));
    CHECK(est.contains(gamma_lower_regularized(4, 1.0)));
    const auto none = empirical_tail_cdf(9, 0.1, 10000, RngStream(6, 1));
    CHECK(none.mean == 0.0);
    CHECK(none.ci99_high > 0.0);
}

TEST_CASE("standard error shrinks like one over root n")
{
    const RngStream rng(8, 0);
    const double a = mc_coherent_mi({2, 2, 1}, 0.5, 50000, rng).std_error;
    const double b = mc_coherent_mi({2, 2, 1}, 0.5, 100000, rng).std_error;
    CHECK(std::abs(a / b / std::sqrt(2.0) - 1.0) < 0.1);

    // Mild on-level: at large A the sample spread itself is dominated by rare draws.
    const double c = mc_onoff_mi(2, 0.1, 2.0, 50000, rng).std_error;
    const double d = mc_onoff_mi(2, 0.1, 2.0, 100000, rng).std_error;
    CHECK(std::abs(c / d / std::sqrt(2.0) - 1.0) < 0.1);
}

TEST_CASE("oracles do not depend on the worker count")
{
    const RngStream rng(9, 1);
    for (int threads : {2, 3, 4})
    {
        const auto a = mc_coherent_mi({2, 3, 1}, 0.1, 30000, rng, 1);
        const auto b = mc_coherent_mi({2, 3, 1}, 0.1, 30000, rng, threads);
        CHECK(a.mean == b.mean);
        CHECK(a.std_error == b.std_error);
        const auto c = empirical_tail_cdf(2, 1.0, 30000, rng, 1);
        const auto d = empirical_tail_cdf(2, 1.0, 30000, rng, threads);
        CHECK(c.mean == d.mean);
    }
}

TEST_CASE("least-squares slope")
{
    const std::vector<std::pair<double, double>> two{{0.0, 0.0}, {1.0, 2.0}};
    const auto f = slope_fit(two);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(0.0));

    std::vector<std::pair<double, double>> line;
    for (int i = 0; i < 5; ++i)
        line.emplace_back(i * 0.7, 3.0 * i * 0.7 - 1.0);
    const auto g = slope_fit(line);
    CHECK(g.slope == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(g.residual < 1e-13);

    const std::vector<std::pair<double, double>> same_x{{1.0, 0.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(slope_fit(same_x), DomainError);
    const std::vector<std::pair<double, double>> single{{1.0, 0.0}};
    CHECK_THROWS_AS(slope_fit(single), DomainError);
}
