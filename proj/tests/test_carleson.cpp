#include <doctest.h>

#include <cmath>
#include <cstring>

#include "complab/carleson.hpp"
#include "complab/geometry.hpp"

using namespace complab;

namespace {

PullbackSampler make_sampler(const std::string& phi, double alpha_std,
                             std::size_t samples = 400000,
                             std::uint64_t seed = 7) {
  PullbackSampler s(SelfMap::parse(phi), RadialWeight::standard_power(alpha_std));
  s.sample_count = samples;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_SUITE("carleson") {

TEST_CASE("identity pullback of a centered box") {
  PullbackSampler s = make_sampler("dilate:1", 0.0);
  RatioEstimate est = pullback_box_ratio(s, cpx(0.0), 0.5);
  // Normalized area of the radius-1/2 disk.
  CHECK(std::abs(est.ratio - 0.25) < 0.25 * 0.05 + 4.0 * est.stderr_);
  CHECK(est.stderr_ < 0.01);
  CHECK_FALSE(est.flagged);
}

TEST_CASE("identity pullback near the boundary") {
  PullbackSampler s = make_sampler("dilate:1", 0.0, 1000000);
  RatioEstimate est = pullback_box_ratio(s, cpx(0.9), 0.5);
  // Euclidean area of the rho-ball over the box mass: 1.4190...
  CHECK(est.ratio > 1.2);
  CHECK(est.ratio < 1.65);
  CHECK(std::abs(est.ratio - 1.419) < 5.0 * est.stderr_ + 0.02);
}

TEST_CASE("strict dilations miss deep boxes exactly") {
  PullbackSampler s = make_sampler("dilate:0.5", 0.0);
  RatioEstimate est = pullback_box_ratio(s, cpx(0.95), 0.5);
  CHECK(est.ratio == 0.0);
  CHECK(est.hits == 0);
  CHECK(est.stderr_ == 0.0);
}

TEST_CASE("scan verdicts for basic symbols") {
  auto radii = dyadic_annuli(4, 8);

  AnnulusScan dil = vanishing_scan(make_sampler("dilate:0.5", 0.0), 0.5, radii, 32);
  CHECK(dil.verdict == Trend::vanishing);
  CHECK(dil.sups.back() == 0.0);

  AnnulusScan id = vanishing_scan(make_sampler("dilate:1", 0.0), 0.5, radii, 32);
  CHECK(id.verdict == Trend::bounded);
  for (double s : id.sups) {
    CHECK(s > 0.25);
    CHECK(s < 4.0);
  }

  AnnulusScan rot = vanishing_scan(make_sampler("rot:2.1", 0.0), 0.5, radii, 32);
  CHECK(rot.verdict == Trend::bounded);
}

TEST_CASE("multiplier decay scans") {
  auto radii = dyadic_annuli(4, 12);

  AnnulusScan dil = multiplier_decay_scan(SelfMap::parse("dilate:0.5"), nullptr,
                                          radii, 128);
  CHECK(dil.verdict == Trend::vanishing);

  AnnulusScan half = multiplier_decay_scan(SelfMap::parse("halfmap"), nullptr,
                                           radii, 128);
  CHECK(half.verdict == Trend::bounded);
  CHECK(half.sups.back() > 1.9);
  CHECK(half.sups.back() < 2.1);
}

TEST_CASE("far-set implication") {
  SelfMap phi = SelfMap::parse("halfmap");
  SelfMap psi = SelfMap::parse("tangentmap");
  const double r = 0.5;
  auto u = [phi, psi, r](cpx z) { return rho(phi(z), psi(z)) >= r ? 1.0 : 0.0; };

  auto radii = dyadic_annuli(4, 10);
  AnnulusScan premise = multiplier_decay_scan(phi, u, radii, 256);
  REQUIRE(premise.verdict == Trend::vanishing);

  PullbackSampler s(phi, RadialWeight::standard_power(0.0), u);
  s.sample_count = 400000;
  s.seed = 11;
  AnnulusScan pullback = vanishing_scan(s, r, radii, 32);
  CHECK(pullback.verdict == Trend::vanishing);
}

TEST_CASE("pointwise monotone multipliers give monotone ratios") {
  auto u_half = [](cpx z) { return z.real() > 0.0 ? 1.0 : 0.0; };
  PullbackSampler s1 = make_sampler("halfmap", 0.0, 200000);
  PullbackSampler s2 = s1;
  s1.multiplier = u_half;
  for (double am : {0.3, 0.7, 0.9}) {
    RatioEstimate r1 = pullback_box_ratio(s1, cpx(am), 0.5);
    RatioEstimate r2 = pullback_box_ratio(s2, cpx(am), 0.5);
    CHECK(r1.ratio <= r2.ratio + 1e-12);  // same seed, same points
  }
}

TEST_CASE("fixed seeds reproduce estimates bit for bit") {
  PullbackSampler s = make_sampler("halfmap", 1.0, 150000, 99);
  RatioEstimate a = pullback_box_ratio(s, cpx(0.8), 0.5);
  RatioEstimate b = pullback_box_ratio(s, cpx(0.8), 0.5);
  CHECK(std::memcmp(&a.ratio, &b.ratio, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.stderr_, &b.stderr_, sizeof(double)) == 0);
  CHECK(a.hits == b.hits);

  auto radii = dyadic_annuli(4, 7);
  AnnulusScan sa = vanishing_scan(s, 0.5, radii, 16);
  AnnulusScan sb = vanishing_scan(s, 0.5, radii, 16);
  CHECK(std::memcmp(sa.sups.data(), sb.sups.data(),
                    sa.sups.size() * sizeof(double)) == 0);
}

TEST_CASE("results do not depend on the worker count") {
  PullbackSampler s = make_sampler("halfmap", 0.0, 100000, 3);
  auto radii = dyadic_annuli(4, 8);
  setenv("COMPLAB_THREADS", "1", 1);
  AnnulusScan serial = vanishing_scan(s, 0.5, radii, 24);
  setenv("COMPLAB_THREADS", "4", 1);
  AnnulusScan parallel = vanishing_scan(s, 0.5, radii, 24);
  unsetenv("COMPLAB_THREADS");
  CHECK(std::memcmp(serial.sups.data(), parallel.sups.data(),
                    serial.sups.size() * sizeof(double)) == 0);
  CHECK(serial.verdict == parallel.verdict);
}

TEST_CASE("tensor strategy approximates the same ratios") {
  PullbackSampler mc = make_sampler("dilate:1", 0.0, 250000);
  PullbackSampler tq = mc;
  tq.strategy = PullbackSampler::Strategy::tensor;
  RatioEstimate a = pullback_box_ratio(mc, cpx(0.6), 0.5);
  RatioEstimate b = pullback_box_ratio(tq, cpx(0.6), 0.5);
  CHECK(std::abs(a.ratio - b.ratio) < 0.08 * std::max(a.ratio, b.ratio));
  // deterministic too
  RatioEstimate b2 = pullback_box_ratio(tq, cpx(0.6), 0.5);
  CHECK(std::memcmp(&b.ratio, &b2.ratio, sizeof(double)) == 0);
}

TEST_CASE("starved estimates degrade the verdict") {
  PullbackSampler s = make_sampler("dilate:1", 0.0, 2000, 5);
  auto radii = dyadic_annuli(8, 10);
  AnnulusScan scan = vanishing_scan(s, 0.5, radii, 16);
  CHECK(scan.verdict == Trend::inconclusive);
}

TEST_CASE("trend classification edge cases") {
  VerdictPolicy policy;
  CHECK(classify_trend({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, policy) ==
        Trend::vanishing);
  CHECK(classify_trend({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, policy) ==
        Trend::bounded);
  CHECK(classify_trend({1.0, 0.5}, {0.0, 0.0}, policy) == Trend::inconclusive);
  CHECK(classify_trend({0.5, 0.2, 0.05, 0.02}, {0.0, 0.0, 0.0, 0.0}, policy) ==
        Trend::inconclusive);  // still above the floor
  // flagged uncertainty across the deciding threshold
  CHECK(classify_trend({0.3, 0.2, 0.15}, {0.0, 0.0, 0.03}, policy) ==
        Trend::inconclusive);
}

}  // TEST_SUITE
