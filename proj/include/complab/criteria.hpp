#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "complab/carleson.hpp"
#include "complab/core.hpp"
#include "complab/geometry.hpp"
#include "complab/operators.hpp"
#include "complab/symbols.hpp"
#include "complab/weights.hpp"

namespace complab {

using json = nlohmann::ordered_json;

/// The joint boundary quantity whose vanishing characterizes compactness
/// of the difference of two composition operators:
/// ((1-|z|^2)/(1-|phi|^2) + (1-|z|^2)/(1-|psi|^2)) * rho(phi(z), psi(z)).
double moorhouse_quantity(const SelfMap& phi, const SelfMap& psi, cpx z);

struct PathTail {
  cpx target;
  double aperture;
  std::vector<double> values;  // quantity along the path, deepest last
  Trend verdict = Trend::inconclusive;
};

/// Self-contained record of a boundary-limit experiment: annulus suprema,
/// optional nontangential path tails, verdict, and the parameters needed
/// to re-run it.
struct CriterionReport {
  std::string quantity_name;
  std::vector<double> annuli;
  std::vector<double> sups;
  std::vector<PathTail> paths;
  Trend verdict = Trend::inconclusive;
  VerdictPolicy policy;
  json parameters;
};

struct LimsupOptions {
  int k_first = 4, k_last = 14;  // annuli 1 - 2^-k
  int angular = 512;
  std::vector<std::pair<cpx, double>> path_specs;  // (target, aperture)
  int path_samples = 26;
  VerdictPolicy policy;
};

/// Numerical stand-in for a boundary limsup: annulus suprema of a
/// pointwise quantity plus optional path tails.
CriterionReport boundary_limsup(const std::function<double(cpx)>& quantity,
                                const std::string& name,
                                const LimsupOptions& opt = {});

/// Max over base symbols i (finite at zeta) of
/// |sum of lambda_j over the first-order-data class of i|^p / d_i^(beta+1);
/// zero when no symbol has a finite angular derivative at zeta.
double essential_norm_lower_bound(
    const std::vector<std::pair<cpx, SelfMap>>& terms, cpx zeta,
    const DoublingCertificate& cert, double p);

struct DataClass {
  cpx eta;
  double deriv;
  cpx lambda_sum;
  std::vector<int> members;  // term indices
};

struct CancellationPoint {
  cpx zeta;
  std::vector<DataClass> classes;
  bool pass = true;  // every class sums to ~0
};

/// Scalar-cancellation requirement: at every boundary grid point, the
/// scalars within each shared first-order-data class must sum to zero.
/// For difference-shaped combinations (1, -1, ..., -1) this also checks
/// disjointness of the subtrahend contact sets and coverage of the first
/// symbol's contact set.
struct CancellationReport {
  std::vector<CancellationPoint> points;  // grid points with finite data
  std::vector<cpx> unresolved;            // inconclusive estimates
  bool pass = true;
  bool difference_shape = false;
  bool disjoint_ok = true;
  bool coverage_ok = true;
};

CancellationReport cancellation_conditions(
    const std::vector<std::pair<cpx, SelfMap>>& terms, int boundary_grid);

enum class Compactness { compact, not_compact, inconclusive };
const char* compactness_name(Compactness c);

/// Numerical stand-in for single-operator compactness: empty contact set
/// on a refined grid plus a >= 4x essential-norm-proxy decay from cut 16
/// to cut 128.
struct SymbolCompactnessProxy {
  bool contacts_empty = false;
  double proxy_decay = 0.0;
  bool compact = false;
};
SymbolCompactnessProxy single_symbol_proxy(const SelfMap& phi,
                                           const RadialWeight& w,
                                           int dim = 256);

/// Verdict for lambda1 C_phi + lambda2 C_psi. Compact iff both symbols are
/// individually compact (proxy) or the scalars cancel and the joint
/// boundary quantity vanishes.
struct PairVerdict {
  Compactness verdict = Compactness::inconclusive;
  cpx lambda1, lambda2;
  double p = 2.0;
  bool lambda_sum_zero = false;
  SymbolCompactnessProxy phi_proxy, psi_proxy;
  bool cond_individual = false;
  CriterionReport moorhouse_scan;
  bool cond_pair = false;
  CancellationReport cancellation;
  json parameters;

  json to_json() const;
  /// The scalar-cancellation + vanishing sub-report; contains nothing
  /// that depends on p.
  json condition_pair_json() const;
};

PairVerdict pair_compactness_verdict(const SelfMap& phi, const SelfMap& psi,
                                     cpx lambda1, cpx lambda2,
                                     const RadialWeight& w, double p,
                                     int proxy_dim = 256);

/// Verdict for C_phi - sum_j lambda_j C_phi_j: all scalars equal one, the
/// subtrahend contact sets partition the minuend's, and the pairwise joint
/// quantity vanishes along nontangential paths at every shared contact
/// point.
struct CombinationVerdict {
  Compactness verdict = Compactness::inconclusive;
  bool hypothesis_noncompact_ok = false;  // reported, not gating
  bool lambdas_all_one = false;
  bool disjoint_ok = false;
  bool coverage_ok = false;
  struct LocalScan {
    cpx zeta;
    int term_index;
    std::vector<PathTail> paths;
    Trend verdict = Trend::inconclusive;
  };
  std::vector<LocalScan> local_scans;
  std::vector<cpx> unresolved;
  json parameters;

  json to_json() const;
};

CombinationVerdict combination_compactness_verdict(
    const SelfMap& phi, const std::vector<std::pair<cpx, SelfMap>>& terms,
    const RadialWeight& w, int boundary_grid = 256, int proxy_dim = 256);

}  // namespace complab
