#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "entmin/orlicz.hpp"
#include "entmin/young.hpp"
#include "oracles.hpp"

using namespace entmin;
using Catch::Approx;

namespace {

GroundSpace two_points() {
  Vec z(2), r(2);
  z << 0.0, 1.0;
  r << 1.0, 1.0;
  return GroundSpace(z, r);
}

}  // namespace

TEST_CASE("catalog entries evaluate their closed forms") {
  GroundSpace g = two_points();

  SECTION("boltzmann_special vanishes at its minimizer m = 1") {
    EntropySpec spec = catalog("boltzmann_special", g);
    CHECK(spec.gamma_star(0, 1.0) == Approx(0.0).margin(1e-15));
    CHECK(spec.m(0) == 1.0);
    CHECK(spec.gamma_star(0, 0.0) == Approx(1.0));      // t log t -> 0
    CHECK(spec.gamma_star(0, -0.1) == kInf);
  }

  SECTION("reverse_relative gamma matches the grid-conjugation oracle") {
    EntropySpec spec = catalog("reverse_relative", g);
    // oracle: sup_t { 0.5 t - (-ln t + t - 1) } over a dense t-grid
    const double oracle = testoracle::grid_conjugate(
        [](double t) { return t > 0 ? -std::log(t) + t - 1.0 : testoracle::kInf; },
        0.5, 1e-9, 10.0);
    CHECK(oracle == Approx(std::log(2.0)).margin(1e-6));
    CHECK(spec.gamma(0, 0.5) == Approx(std::log(2.0)).margin(1e-12));
    CHECK(spec.gamma(0, 1.0) == kInf);
    CHECK(spec.gamma(0, 2.0) == kInf);
  }

  SECTION("quadratic") {
    EntropySpec spec = catalog("quadratic", g);
    CHECK(spec.gamma_star(0, 2.0) == Approx(2.0));
    CHECK(spec.m(0) == 0.0);
  }

  SECTION("boltzmann_variant weight handling") {
    Vec m(2);
    m << 0.5, 2.0;
    EntropySpec spec = catalog("boltzmann_variant", g, m);
    CHECK(spec.gamma_star(0, 0.5) == Approx(0.0).margin(1e-15));
    CHECK(spec.gamma_star(1, 2.0) == Approx(0.0).margin(1e-15));
    CHECK(spec.gamma(1, 1.0) == Approx(2.0 * (std::exp(1.0) - 1.0)));

    Vec bad(2);
    bad << 1.0, 0.0;
    CHECK_THROWS_AS(catalog("boltzmann_variant", g, bad),
                    NonpositiveWeightFunction);
    CHECK_THROWS_AS(catalog("boltzmann_variant", g), InvalidArgument);
  }

  SECTION("unknown name") {
    CHECK_THROWS_AS(catalog("gibbs", g), UnknownEntropy);
  }
}

TEST_CASE("conjugate_numeric on reference integrands") {
  SECTION("self-conjugate quadratic") {
    ScalarConvexFn f{[](double s) { return 0.5 * s * s; }, {}};
    CHECK(conjugate_numeric(f, 3.0) == Approx(4.5).margin(1e-9));
  }

  SECTION("exponential at t = 1 against the grid oracle") {
    auto exp_m1 = [](double s) { return std::expm1(s); };
    const double oracle = testoracle::grid_conjugate(exp_m1, 1.0, -30.0, 30.0);
    CHECK(oracle == Approx(0.0).margin(1e-8));  // t ln t - t + 1 at t = 1
    ScalarConvexFn f{exp_m1, {}};
    CHECK(conjugate_numeric(f, 1.0) == Approx(0.0).margin(1e-9));
  }

  SECTION("exponential at negative t is unbounded") {
    ScalarConvexFn f{[](double s) { return std::expm1(s); }, {}};
    CHECK(conjugate_numeric(f, -0.5) == kInf);
  }

  SECTION("bounded domain") {
    ScalarConvexFn f{
        [](double s) { return s < 1.0 ? -std::log1p(-s) : kInf; },
        {-kInf, 1.0}};
    // conjugate of -log(1-s) is t - 1 - log t for t > 0
    CHECK(conjugate_numeric(f, 2.0) == Approx(1.0 - std::log(2.0)).margin(1e-9));
  }
}

TEST_CASE("young_family assembles the shifted family") {
  GroundSpace g = two_points();

  SECTION("boltzmann_special lambda(1) = e - 2") {
    YoungFamily fam = young_family(catalog("boltzmann_special", g));
    // cross-check against m(z)[e^s - s - 1] with m = 1
    const double direct = 1.0 * (std::exp(1.0) - 1.0 - 1.0);
    CHECK(fam.lambda(0, 1.0) == Approx(direct).margin(1e-14));
    CHECK(fam.lambda(0, 1.0) == Approx(0.7182818284590451).margin(1e-12));
  }

  SECTION("lambda vanishes at 0 for every catalog entry") {
    for (const char* name :
         {"boltzmann_special", "reverse_relative", "quadratic"}) {
      YoungFamily fam = young_family(catalog(name, g));
      CHECK(fam.lambda(0, 0.0) == 0.0);
      CHECK(fam.lambda_max(0, 0.0) == 0.0);
    }
  }

  SECTION("reverse_relative lambda_max at 0.5") {
    YoungFamily fam = young_family(catalog("reverse_relative", g));
    const double left = -std::log(0.5) - 0.5;   // lambda(0.5)
    const double right = -std::log(1.5) + 0.5;  // lambda(-0.5)
    CHECK(fam.lambda_max(0, 0.5) == Approx(std::max(left, right)).margin(1e-14));
    CHECK(fam.lambda_max(0, 0.5) == Approx(0.1931471805599453).margin(1e-12));
  }

  SECTION("lambda_max is even and lambda_pm take absolute arguments") {
    YoungFamily fam = young_family(catalog("reverse_relative", g));
    for (double s : {-2.0, -0.7, -0.1, 0.0, 0.3, 0.9, 1.5}) {
      CHECK(fam.lambda_max(0, s) == fam.lambda_max(0, -s));
      CHECK(fam.lambda_plus(0, s) == fam.lambda(0, std::abs(s)));
      CHECK(fam.lambda_minus(0, s) == fam.lambda(0, -std::abs(s)));
    }
  }

  SECTION("conjugate-shift identity lambda*(t) = gamma*(t + m)") {
    for (const char* name :
         {"boltzmann_special", "reverse_relative", "quadratic"}) {
      EntropySpec spec = catalog(name, g);
      YoungFamily fam = young_family(spec);
      ScalarConvexFn lam{[&](double s) { return fam.lambda(0, s); },
                         fam.dom_lambda(0)};
      for (double t : {-0.6, -0.2, 0.1, 0.4, 1.3}) {
        const double numeric = conjugate_numeric(lam, t, 1e-11);
        const double closed = fam.lambda_star(0, t);
        if (std::isfinite(closed)) {
          CHECK(numeric == Approx(closed).margin(1e-8));
        }
      }
    }
  }
}

TEST_CASE("delta2 classification") {
  GroundSpace g = two_points();
  std::vector<double> samples;
  for (double s = 0.5; s <= 24.0; s += 0.5) samples.push_back(s);

  SECTION("quadratic satisfies globally") {
    Delta2Report rep =
        delta2_classify(young_family(catalog("quadratic", g)), samples);
    CHECK(rep.verdict == Delta2Verdict::Satisfied);
  }

  SECTION("boltzmann_special violates with a large witness") {
    YoungFamily fam = young_family(catalog("boltzmann_special", g));
    Delta2Report rep = delta2_classify(fam, samples);
    CHECK(rep.verdict == Delta2Verdict::Violated);
    REQUIRE(rep.witness.has_value());
    // ratio lambda(2s)/lambda(s) ~ e^s at s = 20
    const double ratio = fam.lambda(0, 40.0) / fam.lambda(0, 20.0);
    CHECK(ratio > 1e6);
  }

  SECTION("reverse_relative violates through its barrier") {
    Delta2Report rep =
        delta2_classify(young_family(catalog("reverse_relative", g)), samples);
    CHECK(rep.verdict == Delta2Verdict::Violated);
  }

  SECTION("numeric spec with flat samples is inconclusive") {
    EntropySpec numeric = make_numeric_entropy(
        "custom_quadratic", {[](double t) { return 0.5 * t * t; }, {}}, 0.0);
    CHECK_FALSE(numeric.delta2_satisfied.has_value());
    std::vector<double> flat{0.1, 0.2, 0.3};
    Delta2Report rep = delta2_classify(young_family(numeric), flat);
    CHECK(rep.verdict == Delta2Verdict::Inconclusive);
    CHECK_FALSE(rep.witness.has_value());
  }

  SECTION("input validation") {
    YoungFamily fam = young_family(catalog("quadratic", g));
    CHECK_THROWS_AS(delta2_classify(fam, {}), InvalidArgument);
    CHECK_THROWS_AS(delta2_classify(fam, {2.0, 1.0}), InvalidArgument);
  }
}

TEST_CASE("Fenchel-Young inequality and touching at t = gamma'(s)") {
  GroundSpace g = two_points();
  for (const char* name :
       {"boltzmann_special", "reverse_relative", "quadratic"}) {
    EntropySpec spec = catalog(name, g);
    for (int trial = 0; trial < 200; ++trial) {
      const double s = testoracle::uniform(-3.0, 0.9);
      const double t = testoracle::uniform(-2.0, 4.0);
      const double gs = spec.gamma(0, s);
      const double gt = spec.gamma_star(0, t);
      if (std::isfinite(gs) && std::isfinite(gt)) {
        CHECK(s * t <= gs + gt + 1e-10);
      }
      if (std::isfinite(gs)) {
        const double touch = spec.gamma_prime(0, s);
        const double gstar_touch = spec.gamma_star(0, touch);
        REQUIRE(std::isfinite(gstar_touch));
        CHECK(s * touch == Approx(gs + gstar_touch).margin(1e-8));
      }
    }
  }
}

TEST_CASE("double conjugation reproduces gamma* on interior samples") {
  const double tol = 1e-10;
  GroundSpace g = two_points();
  struct Entry {
    const char* name;
    Interval dom_star;
  };
  for (const Entry& e : {Entry{"boltzmann_special", {0.0, kInf}},
                         Entry{"reverse_relative", {0.0, kInf}},
                         Entry{"quadratic", {-kInf, kInf}}}) {
    EntropySpec spec = catalog(e.name, g);
    ScalarConvexFn gstar{[&](double t) { return spec.gamma_star(0, t); },
                         e.dom_star};
    auto conj1 = [&](double s) { return conjugate_numeric(gstar, s, tol); };
    ScalarConvexFn gamma{conj1, spec.dom_gamma(0)};
    for (double t : {0.2, 0.5, 1.0, 1.7}) {
      const double twice = conjugate_numeric(gamma, t, tol);
      CHECK(twice == Approx(spec.gamma_star(0, t)).margin(10 * tol));
    }
  }
}

TEST_CASE("gamma' agrees with centered differences of gamma") {
  GroundSpace g = two_points();
  for (const char* name :
       {"boltzmann_special", "reverse_relative", "quadratic"}) {
    EntropySpec spec = catalog(name, g);
    for (double s : {-2.0, -1.0, -0.3, 0.0, 0.4, 0.8}) {
      if (!spec.dom_gamma(0).contains(s + 1e-5)) continue;
      const double fd = central_difference(
          [&](double x) { return spec.gamma(0, x); }, s, 1e-5);
      const double exact = spec.gamma_prime(0, s);
      CHECK(std::abs(fd - exact) <= 1e-6 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("entropy spec invariants hold on samples") {
  GroundSpace g = two_points();
  std::vector<EntropySpec> specs;
  for (const char* name :
       {"boltzmann_special", "reverse_relative", "quadratic"}) {
    specs.push_back(catalog(name, g));
  }
  specs.push_back(catalog("boltzmann_variant", g, Vec(Vec::Constant(2, 0.7))));
  for (const EntropySpec& spec : specs) {
    const double m = spec.m(0);
    CHECK(spec.gamma_star(0, m) == Approx(0.0).margin(1e-14));
    CHECK(spec.gamma(0, 0.0) == 0.0);
    for (int trial = 0; trial < 100; ++trial) {
      const double t = testoracle::uniform(-1.0, 3.0);
      if (t != m && std::isfinite(spec.gamma_star(0, t))) {
        CHECK(spec.gamma_star(0, t) > 0.0);
      }
      // convexity along random segments
      const double t2 = testoracle::uniform(-1.0, 3.0);
      const double alpha = testoracle::uniform(0.0, 1.0);
      const double lhs = spec.gamma_star(0, alpha * t + (1 - alpha) * t2);
      const double rhs = alpha * spec.gamma_star(0, t) +
                         (1 - alpha) * spec.gamma_star(0, t2);
      if (std::isfinite(rhs)) CHECK(lhs <= rhs + 1e-12);
    }
    // gamma' nondecreasing on interior samples
    double prev = -kInf;
    for (double s = -2.0; s < 0.9; s += 0.1) {
      if (!spec.dom_gamma(0).contains(s)) continue;
      const double d = spec.gamma_prime(0, s);
      CHECK(d >= prev - 1e-12);
      prev = d;
    }
  }
}

TEST_CASE("numeric entropy fallback tracks the quadratic catalog entry") {
  GroundSpace g = two_points();
  EntropySpec numeric = make_numeric_entropy(
      "custom_quadratic", {[](double t) { return 0.5 * t * t; }, {}}, 0.0);
  EntropySpec closed = catalog("quadratic", g);
  for (double s : {-1.5, -0.2, 0.0, 0.7, 2.0}) {
    CHECK(numeric.gamma(0, s) == Approx(closed.gamma(0, s)).margin(1e-8));
    CHECK(numeric.gamma_prime(0, s) ==
          Approx(closed.gamma_prime(0, s)).margin(1e-6));
  }
  CHECK_FALSE(numeric.closed_form);
  CHECK_THROWS_AS(
      make_numeric_entropy("bad", {[](double t) { return 0.5 * t * t; }, {}},
                           1.0),
      InvalidArgument);
}
