#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "complab/core.hpp"
#include "complab/symbols.hpp"
#include "complab/weights.hpp"

namespace complab {

enum class Trend { vanishing, bounded, inconclusive };
const char* trend_name(Trend t);

/// Fixed thresholds shared by every boundary-limit verdict in the project.
/// A scan is "vanishing" when the last `window` suprema trend downward and
/// end below vanish_below, "bounded" when they stabilize above
/// bounded_above. Monte-Carlo uncertainty degrades a verdict only when a
/// 3-sigma interval actually crosses the deciding threshold.
struct VerdictPolicy {
  double vanish_below = 0.01;
  double bounded_above = 0.1;
  int window = 3;
  double trend_slack = 1.05;       // nonincreasing up to this factor
  double stabilize_factor = 2.0;   // max/min over the window for "bounded"
  double stderr_cap_rel = 0.05;    // requested relative standard error
  double stderr_floor_abs = 1e-3;  // below this, stderr never flags
};

Trend classify_trend(const std::vector<double>& sups,
                     const std::vector<double>& stderrs,
                     const VerdictPolicy& policy = {});

/// Sampler for the pullback of u * (weight) * dA under a self-map.
/// Radial samples follow the weight's own mass profile tilted toward the
/// boundary; unbiasedness is restored through per-sample importance
/// weights, and accumulation order is fixed so a seed reproduces every
/// estimate bit-for-bit.
struct PullbackSampler {
  PullbackSampler(SelfMap sym, RadialWeight w,
                  std::function<double(cpx)> u = {})
      : symbol(std::move(sym)), weight(std::move(w)), multiplier(std::move(u)) {}

  SelfMap symbol;
  RadialWeight weight;
  /// Bounded nonnegative multiplier; empty means u == 1. Values above
  /// multiplier_bound are rejected at sampling time.
  std::function<double(cpx)> multiplier;
  double multiplier_bound = 1.0;
  std::size_t sample_count = 1'000'000;
  enum class Strategy { monte_carlo, tensor } strategy = Strategy::monte_carlo;
  std::uint64_t seed = 1;
  VerdictPolicy policy;
};

struct RatioEstimate {
  double ratio = 0.0;
  double stderr_ = 0.0;
  std::uint64_t hits = 0;
  bool flagged = false;
};

/// Pullback mass of the rho-ball at (a, r) over the box mass at a.
RatioEstimate pullback_box_ratio(const PullbackSampler& s, cpx a, double r);

struct AnnulusScan {
  std::vector<double> radii;
  std::vector<double> sups;
  std::vector<double> stderrs;  // stderr at the sup-attaining anchor
  Trend verdict = Trend::inconclusive;
};

/// Per-annulus suprema of pullback_box_ratio over `angular` anchors.
AnnulusScan vanishing_scan(const PullbackSampler& s, double r,
                           const std::vector<double>& radii, int angular);

/// Per-annulus suprema of the pointwise quantity
/// u(z) (1-|z|) / (1-|phi(z)|); deterministic, no sampling.
AnnulusScan multiplier_decay_scan(const SelfMap& phi,
                                  const std::function<double(cpx)>& u,
                                  const std::vector<double>& radii,
                                  int angular,
                                  const VerdictPolicy& policy = {});

/// Radii 1 - 2^-k for k in [k_first, k_last].
std::vector<double> dyadic_annuli(int k_first, int k_last);

/// Worker count for scan loops: COMPLAB_THREADS when set, otherwise the
/// hardware count (clamped to [1, 8]). Results never depend on it.
int worker_count();

}  // namespace complab
