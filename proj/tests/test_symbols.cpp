#include <doctest.h>

#include <cmath>

#include "complab/core.hpp"
#include "complab/geometry.hpp"
#include "complab/symbols.hpp"
#include "complab/weights.hpp"

using namespace complab;

TEST_SUITE("symbols") {

TEST_CASE("validation outcomes") {
  SelfMap half = SelfMap::parse("halfmap");
  CHECK(half.validated());
  CHECK(half.validation().max_boundary_modulus <= 1.0 + 1e-12);
  CHECK(half.validation().max_boundary_modulus > 0.999999);

  SelfMap bad = SelfMap::polynomial({cpx(0.0), cpx(2.0)});
  CHECK_FALSE(bad.validated());
  CHECK(bad.validation().max_boundary_modulus ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(bad.require_validated(), std::invalid_argument);

  SelfMap tangent = SelfMap::parse("tangentmap");
  CHECK(tangent.validated());
  CHECK(std::abs(tangent(cpx(0.0, 1.0)) - cpx(0.5, 0.25)) < 1e-15);
  CHECK(std::abs(tangent(cpx(0.0, 1.0))) == doctest::Approx(0.55901699437).epsilon(1e-9));

  // pole inside the closed disk
  SelfMap pole = SelfMap::linear_fractional(cpx(1.0), cpx(0.0), cpx(1.0), cpx(-0.5));
  CHECK_FALSE(pole.validated());
  REQUIRE(pole.validation().singularity.has_value());
  CHECK(std::abs(*pole.validation().singularity - cpx(0.5)) < 1e-12);
}

TEST_CASE("composition closure") {
  SelfMap c = SelfMap::compose(SelfMap::parse("halfmap"),
                               SelfMap::parse("dilate:0.5"));
  CHECK(c.validated());
  CHECK(std::abs(c(cpx(0.4)) - cpx((1.0 + 0.2) / 2.0)) < 1e-15);
}

TEST_CASE("mini-language") {
  CHECK(SelfMap::parse("dilate:0.5").is_dilation());
  CHECK(std::abs(SelfMap::parse("rot:1.0")(cpx(0.5)) -
                 cpx(0.5) * std::polar(1.0, 1.0)) < 1e-15);
  SelfMap lf = SelfMap::parse("linfrac:1,0,0,2");
  CHECK(std::abs(lf(cpx(0.4)) - cpx(0.2)) < 1e-15);
  SelfMap py = SelfMap::parse("poly:0.1,0.2i,-0.1+0.05i");
  CHECK(py.validated());
  CHECK_THROWS_AS(SelfMap::parse("warp:1"), std::invalid_argument);
  try {
    SelfMap::parse("dilate:xyz");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("xyz") != std::string::npos);
  }
}

TEST_CASE("taylor coefficients, exact paths") {
  SelfMap half = SelfMap::parse("halfmap");
  auto c = taylor_coeffs(half, 2, 2);
  REQUIRE(c.size() == 3);
  CHECK(std::abs(c[0] - cpx(0.25)) < 1e-15);
  CHECK(std::abs(c[1] - cpx(0.5)) < 1e-15);
  CHECK(std::abs(c[2] - cpx(0.25)) < 1e-15);

  SelfMap dil = SelfMap::parse("dilate:0.5");
  auto d = taylor_coeffs(dil, 3, 5);
  for (int j = 0; j <= 5; ++j) {
    CHECK(std::abs(d[static_cast<std::size_t>(j)] -
                   (j == 3 ? cpx(0.125) : cpx(0.0))) < 1e-16);
  }

  auto zh = taylor_coeffs(SelfMap::parse("zhalfmap"), 1, 2);
  CHECK(std::abs(zh[0]) < 1e-16);
  CHECK(std::abs(zh[1] - cpx(0.5)) < 1e-15);
  CHECK(std::abs(zh[2] - cpx(0.5)) < 1e-15);
}

TEST_CASE("taylor sampling path agrees with the exact path") {
  // compose() forces the circle-sampling route; the composed map equals the
  // polynomial 0.5 + 0.25 z, whose powers have exact binomial expansions.
  SelfMap sampled = SelfMap::compose(SelfMap::parse("halfmap"),
                                     SelfMap::parse("dilate:0.5"));
  SelfMap exact = SelfMap::polynomial({cpx(0.5), cpx(0.25)});
  for (int n : {0, 1, 2, 5, 17}) {
    auto cs = taylor_coeffs(sampled, n, 24);
    auto ce = taylor_coeffs(exact, n, 24);
    for (std::size_t m = 0; m < cs.size(); ++m) {
      CHECK(std::abs(cs[m] - ce[m]) < 1e-10);
    }
  }
  // linear-fractional against a geometric series: z/(2-z) has
  // coefficients 2^-k for k >= 1.
  SelfMap lf = SelfMap::parse("linfrac:1,0,-1,2");
  auto g = taylor_coeffs(lf, 1, 12);
  CHECK(std::abs(g[0]) < 1e-12);
  for (int k = 1; k <= 12; ++k) {
    CHECK(std::abs(g[static_cast<std::size_t>(k)] - cpx(std::ldexp(1.0, -k))) <
          1e-12);
  }
}

TEST_CASE("taylor power table matches single-power calls") {
  SelfMap lf = SelfMap::parse("linfrac:1,0,-1,2");
  auto table = taylor_power_table(lf, 6, 10);
  for (int n = 0; n < 6; ++n) {
    auto single = taylor_coeffs(lf, n, 10);
    for (std::size_t m = 0; m <= 10; ++m) {
      CHECK(std::abs(table[static_cast<std::size_t>(n)][m] - single[m]) < 1e-11);
    }
  }
}

TEST_CASE("julia quotient examples") {
  SelfMap half = SelfMap::parse("halfmap");
  for (double t : {0.5, 0.9, 0.999}) {
    CHECK(julia_quotient(half, cpx(1.0), t) == doctest::Approx(0.5).epsilon(1e-13));
  }
  CHECK(julia_quotient(SelfMap::parse("zhalfmap"), cpx(1.0), 0.9) ==
        doctest::Approx(1.45).epsilon(1e-12));
  CHECK(julia_quotient(SelfMap::parse("dilate:0.5"), cpx(1.0), 0.99) ==
        doctest::Approx(50.5).epsilon(1e-10));
}

TEST_CASE("angular derivative examples") {
  FirstOrderData h = angular_derivative(SelfMap::parse("halfmap"), cpx(1.0));
  REQUIRE(h.kind == DerivativeKind::finite);
  CHECK(h.derivative_modulus == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(h.image - cpx(1.0)) < 1e-12);

  FirstOrderData z = angular_derivative(SelfMap::parse("zhalfmap"), cpx(1.0));
  REQUIRE(z.kind == DerivativeKind::finite);
  CHECK(z.derivative_modulus == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(std::abs(z.image - cpx(1.0)) < 1e-9);

  FirstOrderData d = angular_derivative(SelfMap::parse("dilate:0.5"), cpx(1.0));
  CHECK(d.kind == DerivativeKind::infinite);

  FirstOrderData t = angular_derivative(SelfMap::parse("tangentmap"), cpx(1.0));
  REQUIRE(t.kind == DerivativeKind::finite);
  CHECK(t.derivative_modulus == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(same_first_order_data(h, t));
  CHECK_FALSE(same_first_order_data(h, z));
}

TEST_CASE("contact scans") {
  auto half_hits = contact_scan(SelfMap::parse("halfmap"), 256);
  REQUIRE(half_hits.size() >= 1);
  for (const auto& hit : half_hits) {
    CHECK(std::abs(hit.zeta - cpx(1.0)) < 1e-10);
    CHECK(hit.data.derivative_modulus == doctest::Approx(0.5).epsilon(1e-12));
  }

  auto rot_hits = contact_scan(SelfMap::parse("rot:0.7"), 64);
  CHECK(rot_hits.size() >= 64);
  for (const auto& hit : rot_hits) {
    CHECK(hit.data.derivative_modulus == doctest::Approx(1.0).epsilon(1e-3));
  }

  CHECK(contact_scan(SelfMap::parse("dilate:0.5"), 128).empty());
}

TEST_CASE("Schwarz-Pick style bounds") {
  Rng rng(31);
  for (const char* spec : {"halfmap", "zhalfmap", "tangentmap"}) {
    SelfMap phi = SelfMap::parse(spec);
    const double f0 = std::abs(phi.origin_image());
    const double c = (1.0 + f0) / (1.0 - f0);
    for (int i = 0; i < 10000; ++i) {
      cpx z = rng.disk_point(0.9999);
      double quotient = (1.0 - std::abs(z)) / (1.0 - std::abs(phi(z)));
      CHECK(quotient <= c + 1e-9);
      CHECK(std::abs(phi(z)) <= (c - 1.0) / c + std::abs(z) / c + 1e-12);
    }
  }
}

TEST_CASE("maps contract the pseudo-hyperbolic metric") {
  Rng rng(32);
  SelfMap phi = SelfMap::parse("tangentmap");
  for (int i = 0; i < 100000; ++i) {
    cpx z = rng.disk_point(0.999), w = rng.disk_point(0.999);
    CHECK(rho(phi(z), phi(w)) <= rho(z, w) + 1e-12);
  }
}

TEST_CASE("box-mass sandwich against the depth quotient") {
  // For a certified weight the box-mass ratio is pinched between fitted
  // multiples of Q^(beta+1) and Q^(alpha+1), Q the depth quotient.
  RadialWeight w = RadialWeight::standard_power(1.0);
  DoublingCertificate cert = doubling_check(w);
  SelfMap phi = SelfMap::parse("halfmap");
  Rng rng(33);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    cpx z = rng.boundary_biased_point(5.0);
    cpx fz = phi(z);
    double q = (1.0 - std::abs(z)) / (1.0 - std::abs(fz));
    double ratio = w.box_mass(z) / w.box_mass(fz);
    lo = std::min(lo, ratio / std::pow(q, cert.beta + 1.0));
    hi = std::max(hi, ratio / std::pow(q, cert.alpha + 1.0));
  }
  CHECK(lo > 0.02);
  CHECK(hi < 50.0);
}

}  // TEST_SUITE
