#include "doctest.h"

#include <cmath>

#include "ncmimo/errors.hpp"
#include "ncmimo/iid_extreme.hpp"

using namespace ncmimo;

TEST_CASE("on-off building blocks")
{
    const auto s = onoff_building_blocks(2, 0.01, 10.0);
    CHECK(s.divergence == doctest::Approx(15.2042094544033).epsilon(1e-13));
    CHECK(s.omega == doctest::Approx(0.001));
    CHECK(onoff_building_blocks(1, 0.3, 0.3).omega == 1.0);
    CHECK_THROWS_AS(onoff_building_blocks(1, 0.3, 0.2), DomainError);

    const auto z = onoff_building_blocks(1, 0.01, 10.0);
    CHECK(z.zeta_star / 11.0 == doctest::Approx(0.930565055178051).epsilon(1e-13));
    CHECK(z.zeta_star == doctest::Approx(10.2362156069586).epsilon(1e-13));

    // The two likelihood terms balance at zeta*.
    for (int r : {1, 2, 4})
        for (double snr : {1e-2, 1e-4})
            for (double A : {3.0, 10.0, 80.0})
            {
                const auto b = onoff_building_blocks(r, snr, A);
                const double lhs = snr / (A * std::pow(1.0 + A, r)) * std::exp(A * b.zeta_star / (1.0 + A));
                CHECK(std::abs(lhs - 1.0) < 1e-10);
            }
}

TEST_CASE("asymptotic on-off mutual information")
{
    CHECK(onoff_mi_asymptotic(1, 0.0, 10.0).value == 0.0);
    const auto a = onoff_mi_asymptotic(1, 0.01, 10.0);
    CHECK(a.value == doctest::Approx(0.00362103302166666).epsilon(1e-12));
    CHECK(a.validity == doctest::Approx(0.930565055178051).epsilon(1e-12));
    CHECK(onoff_mi_asymptotic(2, 0.01, 100.0).value == doctest::Approx(0.002441700474578326).epsilon(1e-12));
    // The third term tends to r snr, so the expression collapses at very large A.
    CHECK(onoff_mi_asymptotic(2, 0.01, 1e6).value < 1e-5);
}

TEST_CASE("on-off mutual information by quadrature")
{
    CHECK(onoff_mi_quadrature(1, 0.01, 10.0).value == doctest::Approx(0.0039577656048).epsilon(1e-9));
    CHECK(onoff_mi_quadrature(1, 0.01, 20.0).value == doctest::Approx(0.00286161283583).epsilon(1e-9));
    CHECK(onoff_mi_quadrature(1, 0.01, 50.0).value == doctest::Approx(0.00156550212068).epsilon(1e-9));
    CHECK(onoff_mi_quadrature(2, 1e-3, 20.0).value == doctest::Approx(0.0004751778316453).epsilon(1e-9));
    CHECK(onoff_mi_quadrature(2, 1e-3, 50.0).value == doctest::Approx(0.0002277832299154).epsilon(1e-9));

    for (int r : {1, 2, 3})
        for (double snr : {1e-2, 1e-3, 1e-4})
            for (double A : {5.0, 20.0, 100.0})
            {
                const auto q = onoff_mi_quadrature(r, snr, A);
                CHECK(q.value <= r * snr + 1e-9);
                CHECK(q.value > 0.0);
            }

    CHECK(std::abs(onoff_mi_quadrature(1, 1e-9, 10.0).value) < 1e-9);

    // With A growing like log(1/snr) the gap to the expansion shrinks faster than snr.
    // At fixed A it does not: the remainder is then of order snr.
    for (int r : {1, 2})
        for (double c : {5.0, 10.0})
        {
            double prev = INFINITY;
            for (double snr : {1e-2, 1e-3, 1e-4})
            {
                const double A = c * std::log(1.0 / snr);
                const double gap = std::abs(onoff_mi_quadrature(r, snr, A).value - onoff_mi_asymptotic(r, snr, A).value);
                CHECK(gap / snr < prev);
                prev = gap / snr;
            }
        }

    try
    {
        onoff_mi_quadrature(1, 0.01, 10.0, 1e-30);
        FAIL("expected a NumericError");
    }
    catch (const NumericError& e)
    {
        CHECK(e.estimate() == doctest::Approx(0.0039577656048).epsilon(1e-9));
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("surrogate M and its minimum")
{
    CHECK(surrogate_M(1, 1e-4, 4.1480) == doctest::Approx(0.397641029954797).epsilon(1e-12));
    CHECK(surrogate_M(1, 1e-4, std::log(1e4)) == doctest::Approx(0.468220475254399).epsilon(1e-12));
    CHECK(std::abs(surrogate_M(1, 1e-4, 1e12) - 1.0) < 1e-3);
    CHECK_THROWS_AS(surrogate_M(1, 1e-4, 1.0), DomainError);

    const auto m = m_star(1, 1e-4);
    CHECK(m.m_star == doctest::Approx(0.468220475254399).epsilon(1e-10));
    CHECK(m.argmin_A == doctest::Approx(std::log(1e4)).epsilon(1e-10));
    CHECK(m.lower_bound == doctest::Approx(0.241068920006856).epsilon(1e-12));
    CHECK(m.upper_bound == doctest::Approx(0.643825405749182).epsilon(1e-12));

    const auto six = m_star(1, 1e-6);
    CHECK(six.lower_bound == doctest::Approx(0.190061156513851).epsilon(1e-12));
    CHECK(six.upper_bound == doctest::Approx(0.571443461680572).epsilon(1e-12));

    for (int r : {1, 2, 4})
        for (double snr : {1e-3, 1e-4, 1e-6})
        {
            const auto a = m_star(r, snr);
            const auto b = m_star(r, snr, 0.0, 0.0, 5e-11);
            CHECK(std::abs(a.m_star - b.m_star) < 1e-9);
            CHECK(a.lower_bound <= a.upper_bound);
        }

    CHECK_THROWS_AS(m_star(1, 1e-4, 50.0, 20.0), DomainError);
    CHECK_THROWS_AS(m_star(1, 0.5), DomainError);
    // Widening the domain toward A = 1 reaches the spurious small-A minimum below the bracket.
    CHECK_THROWS_AS(m_star(1, 1e-4, 1.0001, 800.0), ConsistencyError);
}

TEST_CASE("i.i.d. capacity bracket")
{
    const auto b = iid_capacity_bracket(1, 1e-4);
    CHECK(b.lower == doctest::Approx(3.56174594250818e-5).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(7.58931079993144e-5).epsilon(1e-12));
    CHECK(iid_capacity_bracket(2, 1e-4).delta_iid_dot == doctest::Approx(2.01949059802456e-5).epsilon(1e-12));
    for (int r : {1, 2, 8})
        for (double snr : {1e-2, 1e-5, 1e-9})
        {
            const auto s = iid_capacity_bracket(r, snr);
            CHECK(s.lower <= s.upper);
        }
    CHECK_THROWS_AS(iid_capacity_bracket(1, 0.2), DomainError);
}
