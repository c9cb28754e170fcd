#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "complab/core.hpp"

namespace complab {

/// Tolerances for deciding that two maps share first-order data at a
/// boundary point.
inline constexpr double kEtaMatchTol = 1e-6;
inline constexpr double kDerivMatchRelTol = 1e-3;

struct ValidationReport {
  bool pass = false;
  double max_boundary_modulus = 0.0;
  double max_interior_modulus = 0.0;
  std::optional<cpx> singularity;  // pole found inside the closed disk
};

/// An analytic self-map of the unit disk. Values are immutable after
/// construction (validation included) and cheap to copy/share.
class SelfMap {
 public:
  static SelfMap dilation(cpx s);
  static SelfMap polynomial(std::vector<cpx> coeffs);
  static SelfMap linear_fractional(cpx a, cpx b, cpx c, cpx d);
  static SelfMap compose(const SelfMap& outer, const SelfMap& inner);
  /// Mini-language: dilate:<s> | rot:<theta> | linfrac:<a>,<b>,<c>,<d> |
  /// poly:<c0>,<c1>,... | halfmap | zhalfmap | tangentmap |
  /// compose(<spec>;<spec>). Complex scalars accept "re", "im i", "re+im i".
  static SelfMap parse(const std::string& spec);

  cpx operator()(cpx z) const;
  cpx derivative(cpx z) const;
  /// Batch evaluation through the SIMD kernels; arrays of length n.
  void eval_batch(const double* zre, const double* zim, double* wre,
                  double* wim, std::size_t n) const;

  const ValidationReport& validation() const;
  bool validated() const { return validation().pass; }
  void require_validated() const;
  cpx origin_image() const;
  const std::string& spec() const;

  bool is_dilation() const;
  cpx dilation_factor() const;  // valid only for dilations
  const std::vector<cpx>* poly_coeffs() const;  // null unless polynomial

 private:
  struct Body;
  explicit SelfMap(std::shared_ptr<const Body> body);
  std::shared_ptr<const Body> body_;
};

/// Re-run the closed-disk validation scan (4096 boundary points plus 10^4
/// seeded interior samples).
ValidationReport selfmap_validate(const SelfMap& phi);

/// Coefficients 0..max_degree of phi^power. Dilations and polynomials use
/// exact paths; other kinds are sampled on two circles with per-coefficient
/// agreement checked to 1e-10.
std::vector<cpx> taylor_coeffs(const SelfMap& phi, int power, int max_degree);

/// table[n] = taylor_coeffs(phi, n, max_degree) for n < max_power, sharing
/// circle samples across powers.
std::vector<std::vector<cpx>> taylor_power_table(const SelfMap& phi,
                                                 int max_power,
                                                 int max_degree);

/// (1 - |phi(t zeta)|) / (1 - t).
double julia_quotient(const SelfMap& phi, cpx zeta, double t);

enum class DerivativeKind { finite, infinite, inconclusive };

struct FirstOrderData {
  cpx boundary_point;
  cpx image{};                 // meaningful only when kind == finite
  double derivative_modulus = 0.0;
  DerivativeKind kind = DerivativeKind::inconclusive;
};

bool same_first_order_data(const FirstOrderData& a, const FirstOrderData& b);

/// Radial estimate of the angular derivative at a boundary point: the
/// quotient is sampled on the dyadic grid t = 1 - 2^-k, k = 4..40, and the
/// verdict comes from the k = 30..40 tail window.
FirstOrderData angular_derivative(const SelfMap& phi, cpx zeta);

struct ContactPoint {
  cpx zeta;
  FirstOrderData data;
};

/// Finite-angular-derivative points found on a uniform boundary grid, with
/// one level of local refinement around each hit.
std::vector<ContactPoint> contact_scan(const SelfMap& phi,
                                       int angular_resolution);

}  // namespace complab
