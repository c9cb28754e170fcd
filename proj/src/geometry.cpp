#include "complab/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace complab {

// Involution form: the base point carries the conjugate. The two common
// notational variants differ only by conjugation of the denominator, so
// the modulus (and with it rho) is the same either way.
cpx mobius(cpx z, cpx w) { return (z - w) / (1.0 - std::conj(z) * w); }

double rho(cpx z, cpx w) { return std::abs(mobius(z, w)); }

PseudoDisk pseudo_disk(cpx a, double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument("pseudo_disk: radius must lie in (0, 1)");
  }
  if (std::abs(a) >= 1.0) {
    throw std::invalid_argument("pseudo_disk: anchor must be interior");
  }
  const double denom = 1.0 - r * r * abs2(a);
  PseudoDisk d;
  d.anchor = a;
  d.radius_rho = r;
  d.euclid_center = (1.0 - r * r) * a / denom;
  d.euclid_radius = (1.0 - abs2(a)) * r / denom;
  return d;
}

RadialExtent pseudo_disk_radial_extent(cpx z, double r) {
  const double m = std::abs(z);
  const double denom = 1.0 - r * r * m * m;
  RadialExtent e;
  e.lo = (1.0 - m) * (1.0 - r * m) * (1.0 - r) / denom;
  e.hi = (1.0 - m) * (1.0 + r * m) * (1.0 + r) / denom;
  return e;
}

RadiusChain radius_chain(double r1) {
  if (!(r1 > 0.0 && r1 < 1.0)) {
    throw std::invalid_argument("radius_chain: r1 must lie in (0, 1)");
  }
  auto dbl = [](double t) { return 2.0 * t / (1.0 + t * t); };
  RadiusChain c;
  c.r = dbl(r1);
  c.delta = dbl(c.r);
  c.r2 = dbl(c.delta);
  return c;
}

ApproachPath approach_path(cpx zeta, double aperture, int count) {
  if (!(aperture > 1.0)) {
    throw std::invalid_argument("approach_path: aperture must exceed 1");
  }
  if (count < 2) {
    throw std::invalid_argument("approach_path: need at least two samples");
  }
  const double zmod = std::abs(zeta);
  if (std::abs(zmod - 1.0) > 1e-12) {
    throw std::invalid_argument("approach_path: target must be unimodular");
  }
  const cpx unit = zeta / zmod;

  ApproachPath path;
  path.target = unit;
  path.aperture = aperture;
  path.samples.reserve(static_cast<std::size_t>(count));

  // The curve admits points at modulus s only for 1-s <= 1/M; start the
  // dyadic depth schedule at half that limit.
  const double depth0 = 0.5 / aperture;
  for (int k = 0; k < count; ++k) {
    const double s = 1.0 - std::ldexp(depth0, -k);
    // |z - 1|^2 = 1 + s^2 - 2 s cos(dtheta) = M^2 (1 - s^2)^2 relative to
    // target 1; solve for the angular offset.
    const double rhs = 1.0 + s * s - sqr(aperture * (1.0 - s * s));
    const double c = rhs / (2.0 * s);
    if (c < -1.0 || c > 1.0) {
      ++path.truncated;
      continue;
    }
    const double dtheta = std::acos(c);  // positive-angle side
    const cpx base = s * cpx(std::cos(dtheta), std::sin(dtheta));
    path.samples.push_back(unit * base);
  }
  return path;
}

}  // namespace complab
