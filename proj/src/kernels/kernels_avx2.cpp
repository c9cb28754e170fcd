// AVX2 lane. Compiled with -mavx2; only reached through runtime dispatch.

#include "kernels_impl.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace complab::simd {
namespace {

struct VecAvx2 {
  static constexpr int width = 4;
  __m256d v;
  static VecAvx2 load(const double* p) { return {_mm256_loadu_pd(p)}; }
  static VecAvx2 bcast(double x) { return {_mm256_set1_pd(x)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  VecAvx2 operator+(VecAvx2 o) const { return {_mm256_add_pd(v, o.v)}; }
  VecAvx2 operator-(VecAvx2 o) const { return {_mm256_sub_pd(v, o.v)}; }
  VecAvx2 operator*(VecAvx2 o) const { return {_mm256_mul_pd(v, o.v)}; }
  VecAvx2 operator/(VecAvx2 o) const { return {_mm256_div_pd(v, o.v)}; }
  static VecAvx2 sqrt(VecAvx2 a) { return {_mm256_sqrt_pd(a.v)}; }
  using Mask = __m256d;
  static Mask less(VecAvx2 a, VecAvx2 b) {
    return _mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ);
  }
  static VecAvx2 masked(VecAvx2 a, Mask m) { return {_mm256_and_pd(a.v, m)}; }
  static int count(Mask m) { return __builtin_popcount(_mm256_movemask_pd(m)); }
  double lane(int l) const {
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, v);
    return tmp[l];
  }
};

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k = detail::Impl<VecAvx2>::table();
  return &k;
}

}  // namespace complab::simd

#else

namespace complab::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace complab::simd

#endif
