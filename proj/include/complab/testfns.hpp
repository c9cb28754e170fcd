#pragma once

#include "complab/core.hpp"
#include "complab/weights.hpp"

namespace complab {

/// gamma policy: max(beta + 2, p + 1), which keeps the kernel exponent
/// (gamma+1)/p above 1 and the norm comparison applicable.
double default_gamma(const DoublingCertificate& cert, double p);

/// Normalized kernel-type test function anchored at a point of the disk:
///   ((1 - |a|^2) / (1 - conj(a) z))^((gamma+1)/p) * box_mass(a)^(-1/p),
/// optionally with the dilated denominator (1 - t_N conj(a) z),
/// t_N = 1 - N (1 - |a|).
class TestFunction {
 public:
  static TestFunction plain(cpx anchor, double gamma, double p,
                            RadialWeight weight);
  static TestFunction dilated(cpx anchor, double gamma, double p,
                              RadialWeight weight, double N);

  cpx operator()(cpx z) const;
  /// A^p norm by angular x adaptive-radial quadrature; the angular rule
  /// doubles from 2048 points until converged.
  double norm() const;

  cpx anchor() const { return anchor_; }
  double gamma() const { return gamma_; }
  double p() const { return p_; }
  bool is_dilated() const { return dilated_; }
  double dilation_t() const { return t_; }

 private:
  TestFunction(cpx a, double gamma, double p, RadialWeight w, bool dil,
               double N);
  cpx anchor_;
  double gamma_, p_;
  RadialWeight weight_;
  bool dilated_ = false;
  double n_factor_ = 0.0;
  double t_ = 1.0;  // effective multiplier of conj(a) in the denominator
  double normalization_;
};

/// Both sides of the dilated-pair gap inequality at (a, z, w):
///   lhs       = |(1-conj(a)z)^-s - (1-conj(a)w)^-s|
///             + |(1-t_N conj(a)z)^-s - (1-t_N conj(a)w)^-s|
///   rhs_scale = rho(z, w) |1-conj(a)z|^-s.
/// The empirical constant is the infimum of lhs / rhs_scale over admissible
/// triples; callers fit it, this just evaluates.
struct GapSample {
  double lhs;
  double rhs_scale;
};
GapSample kernel_pair_gap(cpx a, cpx z, cpx w, double s, double N,
                          double r0 = 0.5);

}  // namespace complab
