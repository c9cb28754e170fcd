#pragma once

#include <memory>
#include <string>
#include <vector>

#include "complab/core.hpp"

namespace complab {

/// Certificate produced by doubling_check: upper/lower doubling constants
/// and the tail exponents fitted on a boundary window.
struct DoublingCertificate {
  bool in_upper = false;   // tail mass doubles under r -> (1+r)/2
  double C_upper = 0.0;    // best (largest) ratio found
  bool in_lower = false;   // tail mass gains a factor under r -> 1-(1-r)/K
  double C_lower = 0.0;
  double K = 0.0;          // dilation factor the lower check succeeded at
  double alpha = 0.0;      // smallest fitted tail slope
  double beta = 0.0;       // largest fitted tail slope
  int grid_resolution = 0;
  double max_grid_radius = 0.0;
};

/// A radial density on the unit disk with finite positive total mass.
/// Immutable and cheap to copy; the tail-mass table is built once at
/// construction, so values can be shared freely across threads.
class RadialWeight {
 public:
  /// (1 - r^2)^a with a > -1.
  static RadialWeight standard_power(double a);
  /// Piecewise-linear density through (r_i, w_i); r strictly increasing
  /// inside [0, 1), values clamped to the end samples outside the range.
  static RadialWeight from_table(std::vector<double> radii,
                                 std::vector<double> values);
  /// Mini-language: "std:<alpha>" or "table:<csv path>".
  static RadialWeight parse(const std::string& spec);

  double density(double r) const;
  /// Tail mass: integral of the density over [r, 1).
  double tail_mass(double r) const;
  /// tail_mass(r) / (1 - r).
  double tilde(double r) const;
  /// Carleson box mass at anchor a: tail_mass(|a|) * (1 - |a|).
  double box_mass(cpx a) const;
  /// n-th monomial norm: 2 * integral of r^(2n+1) * density over [0, 1).
  double moment(int n) const;
  std::vector<double> moments(int count) const;
  double total_mass() const;  // moment(0)

  /// Density divided by (1 - r)^lambda. Requires 0 < lambda < alpha where
  /// alpha is the fitted lower tail exponent; rejects anything else.
  RadialWeight lambda_shift(double lambda, const DoublingCertificate& cert) const;

  const std::string& spec() const;

 private:
  struct Body;
  explicit RadialWeight(std::shared_ptr<const Body> body);
  std::shared_ptr<const Body> body_;
};

/// Certify doubling behaviour of the tail mass on the given grid
/// (strictly increasing, reaching at least 1 - 2^-20) and fit the tail
/// exponents on the window r >= 0.9.
DoublingCertificate doubling_check(const RadialWeight& w,
                                   const std::vector<double>& grid);
DoublingCertificate doubling_check(const RadialWeight& w);

/// Default certification grid: log-spaced in 1-r down to 2^-20.
std::vector<double> default_certification_grid();

/// Shorthand for lambda_shift with an internally computed certificate.
RadialWeight lambda_shift(const RadialWeight& w, double lambda);

}  // namespace complab
