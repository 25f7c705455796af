#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bandspec/analysis.hpp"
#include "bandspec/oracles.hpp"

using namespace bandspec;
using namespace bandspec::oracles;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("strip threshold") {
    CHECK(strip_threshold(1.0) == doctest::Approx(4.934802200544679).epsilon(1e-15));
    CHECK(strip_threshold(2.0) == doctest::Approx(1.2337005501361697).epsilon(1e-15));
    for (double d : {0.5, 1.0, 3.0})
        CHECK(strip_threshold(d) * d * d == doctest::Approx(pi * pi / 2));
    CHECK_THROWS_AS(strip_threshold(0.0), DegenerateDomain);
}

TEST_CASE("rectangle ground state") {
    CHECK(rect_ground_state(1, 2) ==
          doctest::Approx(6.168502750680849).epsilon(1e-15));
    CHECK(rect_ground_state(1, 1) == doctest::Approx(pi * pi).epsilon(1e-15));
    CHECK(rect_ground_state(1, 1e9) ==
          doctest::Approx(strip_threshold(1)).epsilon(1e-12));
}

TEST_CASE("robin interval ground state: trivial and secular values") {
    CHECK(robin_interval_lambda0(0.0, 1.0) == 0.0);
    double l = robin_interval_lambda0(-1.0, 1.0);
    CHECK(l == doctest::Approx(1.71).epsilon(0.01));
    CHECK(std::sqrt(l) == doctest::Approx(1.307).epsilon(0.002));
    // Secular equation satisfied at the root.
    CHECK(robin_secular(std::sqrt(l), -1.0, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-9));

    double strong = robin_interval_lambda0(-50.0, 1.0);
    CHECK(strong < pi * pi);
    CHECK(strong > 0.9 * pi * pi);

    CHECK_THROWS_AS(robin_interval_lambda0(1.0, 1.0), OutOfDomain);
}

TEST_CASE("secular root agrees with the 1D FDM oracle") {
    for (double d : {0.5, 1.0, 2.0})
        for (double g : {-0.5, -1.0, -5.0, -20.0}) {
            double gamma = g / 1.0;
            double exact = robin_interval_lambda0(gamma, d);
            double f400 = fdm_1d_robin(gamma, d, 400);
            double f800 = fdm_1d_robin(gamma, d, 800);
            double extrap = richardson(f400, f800);
            CHECK(std::abs(extrap - exact) <= 1e-5 * std::abs(exact));
        }
}

TEST_CASE("lambda0 is monotone in the repulsion strength") {
    double prev = 0.0;
    for (double g : {-0.25, -0.5, -1.0, -2.0, -5.0, -20.0, -100.0}) {
        double l = robin_interval_lambda0(g, 1.0);
        CHECK(l > prev);
        prev = l;
    }
}

TEST_CASE("lambda0 approaches the Dirichlet value from below") {
    for (double d : {0.5, 1.0, 2.0}) {
        double dir = pi * pi / (d * d);
        double l = robin_interval_lambda0(-1e3 / d, d);
        CHECK(l < dir);
        CHECK(l > 0.9 * dir);
    }
}

TEST_CASE("square robin ground state is twice the interval value") {
    CHECK(square_robin_ground_state(0.0, 1.0) == 0.0);
    CHECK(square_robin_ground_state(-1.0, 1.0) ==
          doctest::Approx(2 * robin_interval_lambda0(-1.0, 1.0)).epsilon(1e-14));
    CHECK(square_robin_ground_state(-1.0, 1.0) == doctest::Approx(3.42).epsilon(0.01));
    // gamma -> -inf: approaches 2 pi^2 / d^2 from below.
    double far = square_robin_ground_state(-1e3, 1.0);
    CHECK(far < 2 * pi * pi);
    CHECK(far > 0.95 * 2 * pi * pi);
}

TEST_CASE("1D FDM oracle basics") {
    CHECK(std::abs(fdm_1d_robin(0.0, 1.0, 200)) < 1e-6);
    // Strong repulsion acts like a Dirichlet proxy.
    double f400 = fdm_1d_robin(-1e6, 1.0, 400);
    double f800 = fdm_1d_robin(-1e6, 1.0, 800);
    CHECK(std::abs(richardson(f400, f800) - pi * pi) < 1e-2);
    CHECK_THROWS_AS(fdm_1d_robin(-1.0, 1.0, 5), DegenerateDomain);
}

TEST_CASE("L-shape reference constant") {
    CHECK(lshape_reference(std::sqrt(2.0)) ==
          doctest::Approx(0.93 * pi * pi / 2).epsilon(1e-14));
    CHECK(lshape_reference(pi) == doctest::Approx(0.93).epsilon(1e-14));
    for (double b : {0.5, 1.0, 2.0})
        CHECK(lshape_reference(b) * b * b ==
              doctest::Approx(0.93 * pi * pi).epsilon(1e-14));
}
