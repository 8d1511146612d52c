#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "entmin/orlicz.hpp"
#include "oracles.hpp"

using namespace entmin;
using Catch::Approx;

TEST_CASE("ground space construction rejects bad input") {
  Vec z(2), r(2);
  z << 0.0, 1.0;
  r << 1.0, 0.0;
  CHECK_THROWS_AS(GroundSpace(z, r), InvalidArgument);
  Vec r3(3);
  r3 << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(GroundSpace(z, r3), LengthMismatch);
  CHECK_THROWS_AS(GroundSpace(Vec(), Vec()), InvalidArgument);
}

TEST_CASE("integrate is the weighted finite sum") {
  {
    GroundSpace g(Vec::Ones(2));
    Vec u = Vec::Ones(2);
    CHECK(integrate(u, g) == 2.0);
    CHECK(integrate(Vec::Zero(2), g) == 0.0);
  }
  {
    Vec r(3);
    r << 0.5, 0.5, 1.0;
    GroundSpace g(r);
    Vec u(3);
    u << 1.0, -2.0, 3.0;
    CHECK(integrate(u, g) == Approx(2.5));
    CHECK_THROWS_AS(integrate(Vec::Zero(2), g), LengthMismatch);
  }
}

TEST_CASE("entropy_value on reference densities") {
  GroundSpace g(Vec::Ones(2));
  EntropySpec spec = catalog("boltzmann_special", g);

  SECTION("the minimizer density has zero entropy") {
    Density m(2);
    m << 1.0, 1.0;
    CHECK(entropy_value(spec, m, g) == Approx(0.0).margin(1e-15));
  }

  SECTION("direct summation of the integrand") {
    Density q(2);
    q << 0.3, 0.7;
    // oracle: 0.3 ln 0.3 + 0.7 ln 0.7 + 1 summed term by term
    const double expected =
        (0.3 * std::log(0.3) - 0.3 + 1.0) + (0.7 * std::log(0.7) - 0.7 + 1.0);
    CHECK(expected == Approx(0.3891356979450865).margin(1e-15));
    CHECK(entropy_value(spec, q, g) == Approx(expected).margin(1e-14));
  }

  SECTION("negative mass is infeasible for Boltzmann") {
    Density q(2);
    q << -0.1, 1.1;
    CHECK(entropy_value(spec, q, g) == kInf);
  }
}

TEST_CASE("entropy_value is minimized at m and convex along segments") {
  Vec r(3);
  r << 0.5, 1.0, 1.5;
  GroundSpace g(r);
  for (const char* name :
       {"boltzmann_special", "reverse_relative", "quadratic"}) {
    EntropySpec spec = catalog(name, g);
    Density m(3);
    for (int i = 0; i < 3; ++i) m[i] = spec.m(static_cast<std::size_t>(i));
    CHECK(entropy_value(spec, m, g) == Approx(0.0).margin(1e-14));
    for (int trial = 0; trial < 50; ++trial) {
      Density q1 = testoracle::uniform_vec(3, 0.05, 2.5);
      Density q2 = testoracle::uniform_vec(3, 0.05, 2.5);
      const double a = testoracle::uniform(0.0, 1.0);
      const double lhs = entropy_value(spec, a * q1 + (1 - a) * q2, g);
      const double rhs = a * entropy_value(spec, q1, g) +
                         (1 - a) * entropy_value(spec, q2, g);
      CHECK(lhs <= rhs + 1e-10);
      if ((q1 - m).cwiseAbs().maxCoeff() > 1e-12) {
        CHECK(entropy_value(spec, q1, g) > 0.0);
      }
    }
  }
}

TEST_CASE("luxemburg norm basics") {
  SECTION("zero function has zero norm") {
    GroundSpace g(Vec::Ones(3));
    PointwiseFn sq = [](std::size_t, double s) { return s * s; };
    CHECK(luxemburg_norm(Vec::Zero(3), sq, g) == 0.0);
  }

  SECTION("quadratic gauge on a probability space is the sup of |c|") {
    Vec r(4);
    r << 0.25, 0.25, 0.25, 0.25;
    GroundSpace g(r);
    PointwiseFn sq = [](std::size_t, double s) { return s * s; };
    Vec u = Vec::Constant(4, -3.7);
    // closed form: integral (c/beta)^2 dR = 1 iff beta = |c|
    CHECK(luxemburg_norm(u, sq, g) == Approx(3.7).epsilon(1e-11));
  }

  SECTION("homogeneity on random vectors") {
    Vec r(5);
    r << 0.3, 0.2, 0.1, 0.25, 0.15;
    GroundSpace g(r);
    YoungFamily fam = young_family(catalog("boltzmann_special", g));
    for (int trial = 0; trial < 20; ++trial) {
      Vec u = testoracle::uniform_vec(5, -2.0, 2.0);
      const double n1 = luxemburg_norm(u, fam.lambda_max, g);
      const double n2 = luxemburg_norm(Vec(2.0 * u), fam.lambda_max, g);
      CHECK(n2 == Approx(2.0 * n1).margin(1e-10 * (1.0 + n1)));
    }
  }

  SECTION("unit-ball property") {
    Vec r(3);
    r << 1.0, 2.0, 0.5;
    GroundSpace g(r);
    YoungFamily fam = young_family(catalog("reverse_relative", g));
    for (int trial = 0; trial < 20; ++trial) {
      Vec u = testoracle::uniform_vec(3, -1.5, 1.5);
      const double norm = luxemburg_norm(u, fam.lambda_max, g);
      REQUIRE(norm > 0.0);
      double modular = 0.0;
      for (int i = 0; i < 3; ++i) {
        modular += fam.lambda_max(static_cast<std::size_t>(i), u[i] / norm) *
                   r[i];
      }
      CHECK(modular <= 1.0 + 1e-10);
    }
  }

  SECTION("rejects non-Young integrands") {
    GroundSpace g(Vec::Ones(2));
    PointwiseFn shifted = [](std::size_t, double s) { return s * s + 1.0; };
    CHECK_THROWS_AS(luxemburg_norm(Vec::Ones(2), shifted, g),
                    NotAYoungFunction);
  }
}

TEST_CASE("holder check") {
  SECTION("zero pairing") {
    GroundSpace g(Vec::Ones(2));
    YoungFamily fam = young_family(catalog("quadratic", g));
    HolderReport rep = holder_check(Vec::Zero(2), Vec::Ones(2), fam, g);
    CHECK(rep.pairing == 0.0);
    CHECK(rep.holds);
  }

  SECTION("quadratic case reduces to Cauchy-Schwarz within the factor 2") {
    Vec r(4);
    r << 0.5, 0.25, 1.0, 0.75;
    GroundSpace g(r);
    YoungFamily fam = young_family(catalog("quadratic", g));
    for (int trial = 0; trial < 10; ++trial) {
      Vec u = testoracle::uniform_vec(4, -2.0, 2.0);
      Vec v = testoracle::uniform_vec(4, -2.0, 2.0);
      HolderReport rep = holder_check(u, v, fam, g);
      CHECK(rep.holds);
      // Cauchy-Schwarz itself, for reference
      const double l2u = std::sqrt(integrate(u.cwiseProduct(u), g));
      const double l2v = std::sqrt(integrate(v.cwiseProduct(v), g));
      CHECK(rep.pairing <= l2u * l2v + 1e-10);
    }
  }

  SECTION("boltzmann_special gauge pair") {
    Vec r(2);
    r << 0.5, 0.5;
    GroundSpace g(r);
    YoungFamily fam = young_family(catalog("boltzmann_special", g));
    HolderReport rep = holder_check(Vec::Ones(2), Vec::Ones(2), fam, g);
    CHECK(rep.holds);
    CHECK(rep.pairing == Approx(1.0));
  }
}
