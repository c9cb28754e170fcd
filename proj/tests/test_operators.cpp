#include <doctest.h>

#include <cmath>

#include "complab/operators.hpp"
#include "complab/testfns.hpp"

using namespace complab;

namespace {

double block_diff(const TruncatedOperator& a, const TruncatedOperator& b,
                  int block) {
  double worst = 0.0;
  for (int r = 0; r < block; ++r) {
    for (int c = 0; c < block; ++c) {
      worst = std::max(worst, std::abs(a.at(r, c) - b.at(r, c)));
    }
  }
  return worst;
}

TruncatedOperator product(const TruncatedOperator& a,
                          const TruncatedOperator& b) {
  TruncatedOperator p;
  p.dim = a.dim;
  p.entries.assign(a.entries.size(), cpx(0.0));
  for (int r = 0; r < a.dim; ++r) {
    for (int k = 0; k < a.dim; ++k) {
      cpx ark = a.at(r, k);
      if (ark == cpx(0.0)) continue;
      for (int c = 0; c < a.dim; ++c) p.at(r, c) += ark * b.at(k, c);
    }
  }
  return p;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("identity symbol gives the identity matrix") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator op = composition_matrix(SelfMap::dilation(cpx(1.0)), w, 48);
  for (int r = 0; r < op.dim; ++r) {
    for (int c = 0; c < op.dim; ++c) {
      CHECK(std::abs(op.at(r, c) - (r == c ? cpx(1.0) : cpx(0.0))) < 1e-12);
    }
  }
}

TEST_CASE("dilation symbol is diagonal with powers") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator op = composition_matrix(SelfMap::parse("dilate:0.5"), w, 32);
  for (int r = 0; r < op.dim; ++r) {
    for (int c = 0; c < op.dim; ++c) {
      cpx expect = (r == c) ? cpx(std::ldexp(1.0, -r)) : cpx(0.0);
      CHECK(std::abs(op.at(r, c) - expect) < 1e-15);
    }
  }
}

TEST_CASE("halfmap column entry against hand expansion") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator op = composition_matrix(SelfMap::parse("halfmap"), w, 8);
  CHECK(op.at(0, 1).real() ==
        doctest::Approx(0.70710678118654752).epsilon(1e-12));
  CHECK(op.at(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(op.at(2, 1)) < 1e-14);
}

TEST_CASE("columns agree with direct inner-product quadrature") {
  // <C_phi e_n, e_m> over the disk, radial x angular product rule.
  RadialWeight w = RadialWeight::standard_power(1.0);
  SelfMap phi = SelfMap::parse("tangentmap");
  const int dim = 6;
  TruncatedOperator op = composition_matrix(phi, w, dim);
  auto mom = w.moments(dim);
  const int nth = 512;
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < dim; ++m) {
      cpx acc(0.0);
      const int nr = 400;
      for (int ir = 0; ir < nr; ++ir) {
        double r = (ir + 0.5) / nr;
        cpx ring(0.0);
        for (int it = 0; it < nth; ++it) {
          double th = 2.0 * kPi * it / nth;
          cpx z = r * cpx(std::cos(th), std::sin(th));
          cpx fz = phi(z);
          cpx zm = std::pow(z, m);
          ring += std::pow(fz, n) * std::conj(zm);
        }
        acc += ring * (2.0 * r * w.density(r) / (nr * nth));
      }
      cpx expect = acc / std::sqrt(mom[static_cast<std::size_t>(n)] *
                                   mom[static_cast<std::size_t>(m)]);
      // the midpoint rule itself is only O(h^2) accurate
      CHECK(std::abs(op.at(m, n) - expect) < 1e-5);
    }
  }
}

TEST_CASE("combo matrices") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  SelfMap half = SelfMap::parse("halfmap");
  TruncatedOperator zero =
      combo_matrix({{cpx(1.0), half}, {cpx(-1.0), half}}, w, 24);
  for (const cpx& e : zero.entries) CHECK(e == cpx(0.0));

  TruncatedOperator diff = combo_matrix(
      {{cpx(1.0), SelfMap::dilation(cpx(1.0))},
       {cpx(-1.0), SelfMap::parse("dilate:0.5")}},
      w, 24);
  for (int n = 0; n < diff.dim; ++n) {
    CHECK(std::abs(diff.at(n, n) - cpx(1.0 - std::ldexp(1.0, -n))) < 1e-14);
  }

  CHECK_THROWS_AS(combo_matrix({}, w, 8), std::invalid_argument);
}

TEST_CASE("operator norms") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator id = composition_matrix(SelfMap::dilation(cpx(1.0)), w, 64);
  CHECK(op_norm(id) == doctest::Approx(1.0).epsilon(1e-12));

  TruncatedOperator rot = composition_matrix(SelfMap::parse("rot:0.9"), w, 64);
  CHECK(op_norm(rot) == doctest::Approx(1.0).epsilon(1e-12));

  TruncatedOperator diff = combo_matrix(
      {{cpx(1.0), SelfMap::dilation(cpx(1.0))},
       {cpx(-1.0), SelfMap::parse("dilate:0.5")}},
      w, 64);
  CHECK(op_norm(diff) == doctest::Approx(1.0 - std::ldexp(1.0, -63)).epsilon(1e-12));
}

TEST_CASE("essential norm proxy exact cases") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator dil = composition_matrix(SelfMap::parse("dilate:0.5"), w, 256);
  auto proxy = essnorm_proxy(dil, {16, 32, 64, 128});
  CHECK(std::abs(proxy[0] - std::ldexp(1.0, -16)) < 1e-10);
  CHECK(std::abs(proxy[1] - std::ldexp(1.0, -32)) < 1e-10);
  CHECK(std::abs(proxy[2] - std::ldexp(1.0, -64)) < 1e-10);
  CHECK(std::abs(proxy[3] - std::ldexp(1.0, -128)) < 1e-10);

  TruncatedOperator id = composition_matrix(SelfMap::dilation(cpx(1.0)), w, 64);
  for (double v : essnorm_proxy(id, {8, 16, 48})) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }

  TruncatedOperator zero = combo_matrix(
      {{cpx(1.0), SelfMap::parse("halfmap")},
       {cpx(-1.0), SelfMap::parse("halfmap")}},
      w, 64);
  for (double v : essnorm_proxy(zero, {8, 32})) CHECK(v == 0.0);

  CHECK_THROWS_AS(essnorm_proxy(id, {64}), std::invalid_argument);
}

TEST_CASE("proxy is nonincreasing in the cut") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator diff = combo_matrix(
      {{cpx(1.0), SelfMap::parse("halfmap")},
       {cpx(-1.0), SelfMap::parse("zhalfmap")}},
      w, 128);
  auto proxy = essnorm_proxy(diff, {8, 16, 32, 64, 96});
  for (std::size_t i = 0; i + 1 < proxy.size(); ++i) {
    CHECK(proxy[i + 1] <= proxy[i] * (1.0 + 1e-12));
  }
}

TEST_CASE("dilation sections are weight independent") {
  TruncatedOperator a =
      composition_matrix(SelfMap::parse("dilate:0.5"),
                         RadialWeight::standard_power(0.0), 96);
  TruncatedOperator b =
      composition_matrix(SelfMap::parse("dilate:0.5"),
                         RadialWeight::standard_power(1.0), 96);
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i] == b.entries[i]);
  }
  auto pa = essnorm_proxy(a, {8, 24});
  auto pb = essnorm_proxy(b, {8, 24});
  CHECK(pa[0] == pb[0]);
  CHECK(pa[1] == pb[1]);
}

TEST_CASE("composition law for dyadic dilations is exact") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator s = composition_matrix(SelfMap::parse("dilate:0.5"), w, 48);
  TruncatedOperator t = composition_matrix(SelfMap::parse("dilate:0.25"), w, 48);
  TruncatedOperator st = composition_matrix(SelfMap::parse("dilate:0.125"), w, 48);
  TruncatedOperator prod = product(s, t);
  for (std::size_t i = 0; i < st.entries.size(); ++i) {
    CHECK(prod.entries[i] == st.entries[i]);
  }
}

TEST_CASE("composition law converges on the leading block") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  SelfMap phi = SelfMap::parse("halfmap");
  // A map with an infinite expansion, so the middle-index truncation in the
  // finite-section product actually bites: z / (2 - z).
  SelfMap psi = SelfMap::parse("linfrac:1,0,-1,2");
  SelfMap chain = SelfMap::compose(psi, phi);  // psi after phi

  double err_small = 0.0, err_large = 0.0;
  for (int dim : {16, 48}) {
    TruncatedOperator mp = composition_matrix(phi, w, dim);
    TruncatedOperator mq = composition_matrix(psi, w, dim);
    TruncatedOperator mc = composition_matrix(chain, w, dim);
    double e = block_diff(product(mp, mq), mc, 8);
    (dim == 16 ? err_small : err_large) = e;
  }
  CHECK(err_large < err_small);
  CHECK(err_large < 1e-8);
}

TEST_CASE("test-function images stay below the operator norm") {
  RadialWeight w = RadialWeight::standard_power(0.0);
  TruncatedOperator diff = combo_matrix(
      {{cpx(1.0), SelfMap::parse("halfmap")},
       {cpx(-1.0), SelfMap::parse("zhalfmap")}},
      w, 128);
  const double sigma = op_norm(diff);
  auto mom = w.moments(diff.dim);
  for (double am : {0.5, 0.9, 0.99}) {
    // Coefficients of the anchored test function in the orthonormal basis.
    const double s = 2.0;  // gamma = 3, p = 2
    std::vector<cpx> v(static_cast<std::size_t>(diff.dim));
    double coeff = 1.0;
    for (int n = 0; n < diff.dim; ++n) {
      v[static_cast<std::size_t>(n)] =
          coeff * std::pow(am, n) * std::pow(1.0 - am * am, s) *
          std::sqrt(mom[static_cast<std::size_t>(n)]);
      coeff *= (n + s) / (n + 1.0);
    }
    double norm_in = 0.0, norm_out = 0.0;
    for (int r = 0; r < diff.dim; ++r) {
      cpx acc(0.0);
      for (int c = 0; c < diff.dim; ++c) {
        acc += diff.at(r, c) * v[static_cast<std::size_t>(c)];
      }
      norm_out += abs2(acc);
      norm_in += abs2(v[static_cast<std::size_t>(r)]);
    }
    CHECK(std::sqrt(norm_out) <= sigma * std::sqrt(norm_in) * (1.0 + 1e-12));
  }
}

}  // TEST_SUITE
