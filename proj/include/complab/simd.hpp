#pragma once

#include <cstddef>
#include <cstdint>

#include "complab/core.hpp"

namespace complab::simd {

enum class Lane { scalar, avx2 };

/// Lane selected at startup: AVX2 when the CPU supports it, overridable
/// with COMPLAB_SIMD=scalar|avx2|auto. Both lanes are bit-identical by
/// construction (same operation order, striped reductions, no FMA), so
/// the override only matters for testing and triage.
Lane active_lane();
const char* lane_name(Lane lane);
bool lane_available(Lane lane);

/// Batch kernels over structure-of-arrays complex data. All arrays have
/// length n unless stated otherwise.
///
/// Reduction contract: sums are accumulated in four stripes by index mod 4
/// and combined as (s0+s1)+(s2+s3), so scalar and vector lanes agree
/// bit-for-bit for any input order.
struct Kernels {
  /// w = p(z) with p given by coeffs[0..ncoef-1], Horner evaluation.
  void (*poly_eval)(const cpx* coeffs, std::size_t ncoef, const double* zre,
                    const double* zim, double* wre, double* wim,
                    std::size_t n);
  /// w = (a z + b) / (c z + d).
  void (*linfrac_eval)(cpx a, cpx b, cpx c, cpx d, const double* zre,
                       const double* zim, double* wre, double* wim,
                       std::size_t n);
  /// out = pseudo-hyperbolic distance between paired points a and b.
  void (*rho)(const double* are, const double* aim, const double* bre,
              const double* bim, double* out, std::size_t n);
  /// out = ((1-|z|^2)/(1-|f|^2) + (1-|z|^2)/(1-|g|^2)) * rho(f, g)
  /// where f and g are the two map values at z.
  void (*moorhouse)(const double* zre, const double* zim, const double* fre,
                    const double* fim, const double* gre, const double* gim,
                    double* out, std::size_t n);
  /// Weighted membership count against the Euclidean disk |w - c| < t:
  /// sum_w  = sum of wt[i] over members, sum_w2 = sum of wt[i]^2,
  /// hits   = member count.
  void (*disk_mass)(const double* wre, const double* wim, const double* wt,
                    std::size_t n, double cre, double cim, double t,
                    double* sum_w, double* sum_w2, std::uint64_t* hits);
};

const Kernels& kernels();           // active lane
const Kernels& kernels(Lane lane);  // explicit lane (tests)

}  // namespace complab::simd
