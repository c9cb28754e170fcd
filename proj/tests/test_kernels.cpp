#include <doctest.h>

#include <cstring>
#include <vector>

#include "complab/core.hpp"
#include "complab/simd.hpp"

using namespace complab;

namespace {

struct Batch {
  std::vector<double> re, im;
  std::size_t n() const { return re.size(); }
};

Batch random_disk_batch(std::size_t n, std::uint64_t seed, double rmax = 0.98) {
  Rng rng(seed);
  Batch b;
  b.re.resize(n);
  b.im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cpx z = rng.disk_point(rmax);
    b.re[i] = z.real();
    b.im[i] = z.imag();
  }
  return b;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("poly_eval matches per-element Horner") {
  const std::vector<cpx> coeffs = {cpx(0.1, -0.2), cpx(0.5, 0.0),
                                   cpx(-0.3, 0.25)};
  Batch z = random_disk_batch(137, 11);
  std::vector<double> wre(z.n()), wim(z.n());
  simd::kernels(simd::Lane::scalar)
      .poly_eval(coeffs.data(), coeffs.size(), z.re.data(), z.im.data(),
                 wre.data(), wim.data(), z.n());
  for (std::size_t i = 0; i < z.n(); ++i) {
    cpx zz(z.re[i], z.im[i]);
    cpx expect = coeffs[0] + zz * (coeffs[1] + zz * coeffs[2]);
    CHECK(std::abs(cpx(wre[i], wim[i]) - expect) < 1e-14);
  }
}

TEST_CASE("linfrac_eval matches complex arithmetic") {
  const cpx a(0.4, 0.1), b(0.05, -0.02), c(0.1, 0.0), d(1.2, 0.3);
  Batch z = random_disk_batch(83, 12);
  std::vector<double> wre(z.n()), wim(z.n());
  simd::kernels(simd::Lane::scalar)
      .linfrac_eval(a, b, c, d, z.re.data(), z.im.data(), wre.data(),
                    wim.data(), z.n());
  for (std::size_t i = 0; i < z.n(); ++i) {
    cpx zz(z.re[i], z.im[i]);
    cpx expect = (a * zz + b) / (c * zz + d);
    CHECK(std::abs(cpx(wre[i], wim[i]) - expect) < 1e-13);
  }
}

TEST_CASE("disk_mass equals a naive accumulation") {
  Batch w = random_disk_batch(1001, 13);
  std::vector<double> wt(w.n());
  Rng rng(14);
  for (auto& x : wt) x = rng.uniform(0.0, 2.0);
  const cpx center(0.2, -0.1);
  const double radius = 0.45;
  double sw = 0.0, sw2 = 0.0;
  std::uint64_t hits = 0;
  simd::kernels(simd::Lane::scalar)
      .disk_mass(w.re.data(), w.im.data(), wt.data(), w.n(), center.real(),
                 center.imag(), radius, &sw, &sw2, &hits);
  double nw = 0.0, nw2 = 0.0;
  std::uint64_t nh = 0;
  for (std::size_t i = 0; i < w.n(); ++i) {
    if (abs2(cpx(w.re[i], w.im[i]) - center) < radius * radius) {
      nw += wt[i];
      nw2 += wt[i] * wt[i];
      ++nh;
    }
  }
  CHECK(hits == nh);
  CHECK(sw == doctest::Approx(nw).epsilon(1e-13));
  CHECK(sw2 == doctest::Approx(nw2).epsilon(1e-13));
}

TEST_CASE("scalar and AVX2 lanes agree bit-for-bit") {
  if (!simd::lane_available(simd::Lane::avx2)) {
    MESSAGE("AVX2 unavailable; lane equivalence not exercised");
    return;
  }
  const auto& ks = simd::kernels(simd::Lane::scalar);
  const auto& kv = simd::kernels(simd::Lane::avx2);

  // Sizes straddling the 4-wide blocking, including tails.
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    Batch z = random_disk_batch(n, 100 + n);
    Batch w = random_disk_batch(n, 200 + n);
    std::vector<double> s1(n), s2(n), v1(n), v2(n);

    const std::vector<cpx> coeffs = {cpx(0.625), cpx(0.25), cpx(0.125)};
    ks.poly_eval(coeffs.data(), coeffs.size(), z.re.data(), z.im.data(),
                 s1.data(), s2.data(), n);
    kv.poly_eval(coeffs.data(), coeffs.size(), z.re.data(), z.im.data(),
                 v1.data(), v2.data(), n);
    CHECK(bitwise_equal(s1, v1));
    CHECK(bitwise_equal(s2, v2));

    ks.linfrac_eval(cpx(0.3, 0.1), cpx(0.0), cpx(0.2), cpx(1.1), z.re.data(),
                    z.im.data(), s1.data(), s2.data(), n);
    kv.linfrac_eval(cpx(0.3, 0.1), cpx(0.0), cpx(0.2), cpx(1.1), z.re.data(),
                    z.im.data(), v1.data(), v2.data(), n);
    CHECK(bitwise_equal(s1, v1));
    CHECK(bitwise_equal(s2, v2));

    ks.rho(z.re.data(), z.im.data(), w.re.data(), w.im.data(), s1.data(), n);
    kv.rho(z.re.data(), z.im.data(), w.re.data(), w.im.data(), v1.data(), n);
    CHECK(bitwise_equal(s1, v1));

    Batch f = random_disk_batch(n, 300 + n, 0.9);
    Batch g = random_disk_batch(n, 400 + n, 0.9);
    ks.moorhouse(z.re.data(), z.im.data(), f.re.data(), f.im.data(),
                 g.re.data(), g.im.data(), s1.data(), n);
    kv.moorhouse(z.re.data(), z.im.data(), f.re.data(), f.im.data(),
                 g.re.data(), g.im.data(), v1.data(), n);
    CHECK(bitwise_equal(s1, v1));

    std::vector<double> wt(n);
    Rng rng(500 + n);
    for (auto& x : wt) x = rng.uniform(0.0, 3.0);
    double sw_s = 0, sw2_s = 0, sw_v = 0, sw2_v = 0;
    std::uint64_t h_s = 0, h_v = 0;
    ks.disk_mass(w.re.data(), w.im.data(), wt.data(), n, 0.1, 0.05, 0.5, &sw_s,
                 &sw2_s, &h_s);
    kv.disk_mass(w.re.data(), w.im.data(), wt.data(), n, 0.1, 0.05, 0.5, &sw_v,
                 &sw2_v, &h_v);
    CHECK(h_s == h_v);
    CHECK(std::memcmp(&sw_s, &sw_v, sizeof(double)) == 0);
    CHECK(std::memcmp(&sw2_s, &sw2_v, sizeof(double)) == 0);
  }
}

TEST_CASE("lane dispatch") {
  CHECK(simd::lane_available(simd::Lane::scalar));
  const char* name = simd::lane_name(simd::active_lane());
  CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
}

}  // TEST_SUITE
