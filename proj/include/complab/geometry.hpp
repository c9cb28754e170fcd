#pragma once

#include <vector>

#include "complab/core.hpp"

namespace complab {

/// Mobius involution exchanging 0 and z: (z - w) / (1 - conj(w) z).
cpx mobius(cpx z, cpx w);

/// Pseudo-hyperbolic distance |mobius(z, w)|.
double rho(cpx z, cpx w);

/// The rho-ball around an anchor is a Euclidean disk; this carries both
/// descriptions.
struct PseudoDisk {
  cpx anchor;
  double radius_rho;
  cpx euclid_center;
  double euclid_radius;

  bool contains(cpx w) const {
    return abs2(w - euclid_center) < euclid_radius * euclid_radius;
  }
  double min_modulus() const { return std::abs(euclid_center) - euclid_radius; }
  double max_modulus() const { return std::abs(euclid_center) + euclid_radius; }
};

PseudoDisk pseudo_disk(cpx a, double r);

/// Bounds on 1-|w| valid for every w in the rho-ball of radius r at z.
struct RadialExtent {
  double lo, hi;
};
RadialExtent pseudo_disk_radial_extent(cpx z, double r);

/// r1 -> r -> delta -> r2 under the doubling map t -> 2t/(1+t^2);
/// a strictly increasing chain inside (0, 1).
struct RadiusChain {
  double r, delta, r2;
};
RadiusChain radius_chain(double r1);

/// Sampled nontangential curve |z - zeta| = M (1 - |z|^2) approaching the
/// unimodular target. Samples follow the dyadic depth schedule
/// 1-|z_k| = 2^-k (1-|z_1|) on the positive-angle side of the curve.
struct ApproachPath {
  cpx target;
  double aperture;
  std::vector<cpx> samples;
  int truncated = 0;  // depths that had no angular solution
};

ApproachPath approach_path(cpx zeta, double aperture, int count);

}  // namespace complab
