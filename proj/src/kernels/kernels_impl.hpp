#pragma once

// Shared kernel bodies, templated on a 1- or 4-wide vector type. Both
// lanes instantiate the same code, which is what makes them bit-identical:
// identical operation order per element, identical stripe partition for
// reductions, and no fused multiply-add anywhere.

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "complab/simd.hpp"

namespace complab::simd::detail {

struct VecScalar {
  static constexpr int width = 1;
  double v;
  static VecScalar load(const double* p) { return {p[0]}; }
  static VecScalar bcast(double x) { return {x}; }
  void store(double* p) const { p[0] = v; }
  VecScalar operator+(VecScalar o) const { return {v + o.v}; }
  VecScalar operator-(VecScalar o) const { return {v - o.v}; }
  VecScalar operator*(VecScalar o) const { return {v * o.v}; }
  VecScalar operator/(VecScalar o) const { return {v / o.v}; }
  static VecScalar sqrt(VecScalar a) { return {std::sqrt(a.v)}; }
  using Mask = bool;
  static Mask less(VecScalar a, VecScalar b) { return a.v < b.v; }
  static VecScalar masked(VecScalar a, Mask m) { return {m ? a.v : 0.0}; }
  static int count(Mask m) { return m ? 1 : 0; }
  double lane(int) const { return v; }
};

template <class V>
struct Impl {
  static void poly_eval(const cpx* coeffs, std::size_t ncoef,
                        const double* zre, const double* zim, double* wre,
                        double* wim, std::size_t n) {
    std::size_t i = 0;
    for (; i + V::width <= n; i += V::width) {
      V zr = V::load(zre + i), zi = V::load(zim + i);
      V wr = V::bcast(coeffs[ncoef - 1].real());
      V wi = V::bcast(coeffs[ncoef - 1].imag());
      for (std::size_t k = ncoef - 1; k-- > 0;) {
        V tr = wr * zr - wi * zi;
        V ti = wr * zi + wi * zr;
        wr = tr + V::bcast(coeffs[k].real());
        wi = ti + V::bcast(coeffs[k].imag());
      }
      wr.store(wre + i);
      wi.store(wim + i);
    }
    if (i < n) {
      Impl<VecScalar>::poly_eval(coeffs, ncoef, zre + i, zim + i, wre + i,
                                 wim + i, n - i);
    }
  }

  static void linfrac_eval(cpx a, cpx b, cpx c, cpx d, const double* zre,
                           const double* zim, double* wre, double* wim,
                           std::size_t n) {
    std::size_t i = 0;
    for (; i + V::width <= n; i += V::width) {
      V zr = V::load(zre + i), zi = V::load(zim + i);
      // numerator a z + b
      V nr = (V::bcast(a.real()) * zr - V::bcast(a.imag()) * zi) +
             V::bcast(b.real());
      V ni = (V::bcast(a.real()) * zi + V::bcast(a.imag()) * zr) +
             V::bcast(b.imag());
      // denominator c z + d
      V dr = (V::bcast(c.real()) * zr - V::bcast(c.imag()) * zi) +
             V::bcast(d.real());
      V di = (V::bcast(c.real()) * zi + V::bcast(c.imag()) * zr) +
             V::bcast(d.imag());
      V den = dr * dr + di * di;
      V wr = (nr * dr + ni * di) / den;
      V wi = (ni * dr - nr * di) / den;
      wr.store(wre + i);
      wi.store(wim + i);
    }
    if (i < n) {
      Impl<VecScalar>::linfrac_eval(a, b, c, d, zre + i, zim + i, wre + i,
                                    wim + i, n - i);
    }
  }

  // rho(a, b) = |a - b| / |1 - conj(b) a|
  static void rho(const double* are, const double* aim, const double* bre,
                  const double* bim, double* out, std::size_t n) {
    std::size_t i = 0;
    const V one = V::bcast(1.0);
    for (; i + V::width <= n; i += V::width) {
      V ar = V::load(are + i), ai = V::load(aim + i);
      V br = V::load(bre + i), bi = V::load(bim + i);
      V dr = ar - br, di = ai - bi;
      V num2 = dr * dr + di * di;
      V er = one - (br * ar + bi * ai);
      V ei = V::bcast(0.0) - (br * ai - bi * ar);
      V den2 = er * er + ei * ei;
      V r = V::sqrt(num2 / den2);
      r.store(out + i);
    }
    if (i < n) {
      Impl<VecScalar>::rho(are + i, aim + i, bre + i, bim + i, out + i, n - i);
    }
  }

  static void moorhouse(const double* zre, const double* zim,
                        const double* fre, const double* fim,
                        const double* gre, const double* gim, double* out,
                        std::size_t n) {
    std::size_t i = 0;
    const V one = V::bcast(1.0);
    for (; i + V::width <= n; i += V::width) {
      V zr = V::load(zre + i), zi = V::load(zim + i);
      V fr = V::load(fre + i), fi = V::load(fim + i);
      V gr = V::load(gre + i), gi = V::load(gim + i);
      V z2 = one - (zr * zr + zi * zi);
      V f2 = one - (fr * fr + fi * fi);
      V g2 = one - (gr * gr + gi * gi);
      V quot = z2 / f2 + z2 / g2;
      V dr = fr - gr, di = fi - gi;
      V num2 = dr * dr + di * di;
      V er = one - (gr * fr + gi * fi);
      V ei = V::bcast(0.0) - (gr * fi - gi * fr);
      V den2 = er * er + ei * ei;
      V q = quot * V::sqrt(num2 / den2);
      q.store(out + i);
    }
    if (i < n) {
      Impl<VecScalar>::moorhouse(zre + i, zim + i, fre + i, fim + i, gre + i,
                                 gim + i, out + i, n - i);
    }
  }

  static void disk_mass(const double* wre, const double* wim,
                        const double* wt, std::size_t n, double cre,
                        double cim, double t, double* sum_w, double* sum_w2,
                        std::uint64_t* hits) {
    constexpr int groups = 4 / V::width;
    V acc_w[groups], acc_w2[groups];
    for (int g = 0; g < groups; ++g) {
      acc_w[g] = V::bcast(0.0);
      acc_w2[g] = V::bcast(0.0);
    }
    std::uint64_t h = 0;
    const V vcr = V::bcast(cre), vci = V::bcast(cim), vt2 = V::bcast(t * t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      for (int g = 0; g < groups; ++g) {
        const std::size_t off = i + static_cast<std::size_t>(g) * V::width;
        V xr = V::load(wre + off), xi = V::load(wim + off);
        V dr = xr - vcr, di = xi - vci;
        V d2 = dr * dr + di * di;
        auto m = V::less(d2, vt2);
        V w = V::masked(V::load(wt + off), m);
        acc_w[g] = acc_w[g] + w;
        acc_w2[g] = acc_w2[g] + w * w;
        h += static_cast<std::uint64_t>(V::count(m));
      }
    }
    double s[4], s2[4];
    for (int g = 0; g < groups; ++g) {
      for (int l = 0; l < V::width; ++l) {
        s[g * V::width + l] = acc_w[g].lane(l);
        s2[g * V::width + l] = acc_w2[g].lane(l);
      }
    }
    // Tail elements keep their absolute stripe (index mod 4).
    for (; i < n; ++i) {
      double dr = wre[i] - cre, di = wim[i] - cim;
      double d2 = dr * dr + di * di;
      bool m = d2 < t * t;
      double w = m ? wt[i] : 0.0;
      s[i % 4] += w;
      s2[i % 4] += w * w;
      h += m ? 1 : 0;
    }
    *sum_w = (s[0] + s[1]) + (s[2] + s[3]);
    *sum_w2 = (s2[0] + s2[1]) + (s2[2] + s2[3]);
    *hits = h;
  }

  static Kernels table() {
    return Kernels{&poly_eval, &linfrac_eval, &rho, &moorhouse, &disk_mass};
  }
};

}  // namespace complab::simd::detail
