#include "complab/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "complab/geometry.hpp"
#include "complab/quadrature.hpp"
#include "complab/simd.hpp"

namespace complab {
namespace {

constexpr int kCdfKnots = 10000;
// The radial grid stops at 1 - 2^-40; the un-sampled sliver beyond carries
// tilted mass below 1e-12, orders of magnitude under any box mass a scan
// can reach, so truncating there keeps the estimator effectively unbiased
// and every sampled radius strictly inside the disk.
constexpr double kGridDepth = 40.0;

// Image points of the sample pool under the symbol, sorted by modulus so a
// box query only touches its radial band.
struct Pool {
  std::vector<double> wre, wim, wt, wmod;
  std::size_t n = 0;
};

struct RadialCdf {
  std::vector<double> r, cum;  // cum[j] = integral of the tilted density up to r[j]
  double total = 0.0;
  double tilt = 0.0;

  double sample(double v) const {
    double target = v * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t j = std::min(static_cast<std::size_t>(it - cum.begin()),
                             cum.size() - 1);
    if (j == 0) return r.front();
    double seg = cum[j] - cum[j - 1];
    double frac = seg > 0.0 ? (target - cum[j - 1]) / seg : 0.5;
    return r[j - 1] + frac * (r[j] - r[j - 1]);
  }
};

// Radial density 2 r w(r) (1-r)^-tilt; the tilt buys resolution in deep
// annuli and is undone by the per-sample weight total * (1-r)^tilt.
RadialCdf build_cdf(const RadialWeight& w, double tilt) {
  RadialCdf cdf;
  cdf.tilt = tilt;
  cdf.r.reserve(kCdfKnots + 1);
  for (int j = 0; j <= kCdfKnots; ++j) {
    cdf.r.push_back(1.0 - std::exp2(-kGridDepth * j / kCdfKnots));
  }
  cdf.cum.assign(cdf.r.size(), 0.0);
  auto density = [&](double rr) {
    return 2.0 * rr * w.density(rr) * std::pow(1.0 - rr, -tilt);
  };
  for (std::size_t j = 1; j < cdf.r.size(); ++j) {
    double err = 0.0;
    cdf.cum[j] = cdf.cum[j - 1] +
                 gk15_panel(density, cdf.r[j - 1], cdf.r[j], &err);
  }
  cdf.total = cdf.cum.back();
  return cdf;
}

double pick_tilt(const RadialWeight& w) {
  // Keep the tilted density integrable: alpha/2 caps the tilt for thin
  // tails, 1/2 is enough everywhere else.
  DoublingCertificate cert = doubling_check(w);
  double a = cert.alpha > 0.0 ? cert.alpha : 1.0;
  return std::min(0.5, 0.5 * a);
}

Pool build_pool(const PullbackSampler& s) {
  s.symbol.require_validated();
  const std::size_t n = s.sample_count;
  if (n == 0) throw std::invalid_argument("sampler: sample_count must be positive");

  const double tilt = pick_tilt(s.weight);
  RadialCdf cdf = build_cdf(s.weight, tilt);

  std::vector<double> zre(n), zim(n), rads(n);
  if (s.strategy == PullbackSampler::Strategy::monte_carlo) {
    Rng rng(s.seed);
    for (std::size_t i = 0; i < n; ++i) {
      double r = cdf.sample(rng.uniform());
      double th = rng.uniform(0.0, 2.0 * kPi);
      rads[i] = r;
      zre[i] = r * std::cos(th);
      zim[i] = r * std::sin(th);
    }
  } else {
    const std::size_t nr = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const std::size_t nth = nr;
    zre.resize(nr * nth);
    zim.resize(nr * nth);
    rads.resize(nr * nth);
    std::size_t i = 0;
    for (std::size_t a = 0; a < nr; ++a) {
      double r = cdf.sample((a + 0.5) / static_cast<double>(nr));
      for (std::size_t b = 0; b < nth; ++b, ++i) {
        double th = 2.0 * kPi * (b + 0.5) / static_cast<double>(nth);
        rads[i] = r;
        zre[i] = r * std::cos(th);
        zim[i] = r * std::sin(th);
      }
    }
  }

  Pool pool;
  pool.n = zre.size();
  pool.wre.resize(pool.n);
  pool.wim.resize(pool.n);
  s.symbol.eval_batch(zre.data(), zim.data(), pool.wre.data(), pool.wim.data(),
                      pool.n);

  pool.wt.resize(pool.n);
  for (std::size_t i = 0; i < pool.n; ++i) {
    double u = s.multiplier ? s.multiplier(cpx(zre[i], zim[i])) : 1.0;
    if (u < 0.0) throw std::invalid_argument("sampler: multiplier must be nonnegative");
    if (u > s.multiplier_bound * (1.0 + 1e-12)) {
      throw std::invalid_argument("sampler: multiplier exceeds its recorded bound");
    }
    pool.wt[i] = cdf.total * std::pow(1.0 - rads[i], tilt) * u;
  }

  pool.wmod.resize(pool.n);
  for (std::size_t i = 0; i < pool.n; ++i) {
    pool.wmod[i] = std::hypot(pool.wre[i], pool.wim[i]);
  }
  std::vector<std::size_t> order(pool.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pool.wmod[a] != pool.wmod[b]) return pool.wmod[a] < pool.wmod[b];
    return a < b;
  });
  Pool sorted;
  sorted.n = pool.n;
  sorted.wre.resize(pool.n);
  sorted.wim.resize(pool.n);
  sorted.wt.resize(pool.n);
  sorted.wmod.resize(pool.n);
  for (std::size_t i = 0; i < pool.n; ++i) {
    sorted.wre[i] = pool.wre[order[i]];
    sorted.wim[i] = pool.wim[order[i]];
    sorted.wt[i] = pool.wt[order[i]];
    sorted.wmod[i] = pool.wmod[order[i]];
  }
  return sorted;
}

RatioEstimate ratio_from_pool(const Pool& pool, const RadialWeight& w,
                              const VerdictPolicy& policy, cpx a, double r) {
  PseudoDisk disk = pseudo_disk(a, r);
  const double lo = disk.min_modulus() < 0.0 ? 0.0 : disk.min_modulus();
  const double hi = disk.max_modulus();
  auto first = std::lower_bound(pool.wmod.begin(), pool.wmod.end(), lo);
  auto last = std::upper_bound(pool.wmod.begin(), pool.wmod.end(), hi);
  const std::size_t off = static_cast<std::size_t>(first - pool.wmod.begin());
  const std::size_t len = static_cast<std::size_t>(last - first);

  double sum_w = 0.0, sum_w2 = 0.0;
  std::uint64_t hits = 0;
  if (len > 0) {
    simd::kernels().disk_mass(pool.wre.data() + off, pool.wim.data() + off,
                              pool.wt.data() + off, len,
                              disk.euclid_center.real(),
                              disk.euclid_center.imag(), disk.euclid_radius,
                              &sum_w, &sum_w2, &hits);
  }
  const double n = static_cast<double>(pool.n);
  const double mean = sum_w / n;
  const double var = std::max(0.0, (sum_w2 / n - mean * mean) / n);
  const double box = w.box_mass(a);

  RatioEstimate est;
  est.ratio = mean / box;
  est.stderr_ = std::sqrt(var) / box;
  // Sample variance underestimates badly at low counts; floor it at the
  // Poisson scale.
  if (hits > 0) {
    est.stderr_ = std::max(est.stderr_,
                           est.ratio / std::sqrt(static_cast<double>(hits)));
  }
  est.hits = hits;
  est.flagged = est.stderr_ > policy.stderr_cap_rel * std::max(est.ratio, 1e-300) &&
                est.stderr_ > policy.stderr_floor_abs;
  return est;
}

void parallel_over(std::size_t count, const std::function<void(std::size_t)>& fn) {
  int workers = worker_count();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) /
                      static_cast<std::size_t>(workers);
  for (int t = 0; t < workers; ++t) {
    std::size_t lo = static_cast<std::size_t>(t) * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::vanishing:
      return "vanishing";
    case Trend::bounded:
      return "bounded";
    case Trend::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

int worker_count() {
  if (const char* env = std::getenv("COMPLAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

Trend classify_trend(const std::vector<double>& sups,
                     const std::vector<double>& stderrs,
                     const VerdictPolicy& policy) {
  const int w = policy.window;
  if (static_cast<int>(sups.size()) < w) return Trend::inconclusive;
  const std::size_t n = sups.size();
  bool trending_down = true;
  for (std::size_t i = n - static_cast<std::size_t>(w); i + 1 < n; ++i) {
    if (sups[i + 1] > sups[i] * policy.trend_slack + 1e-300) {
      trending_down = false;
      break;
    }
  }
  double wmin = sups[n - static_cast<std::size_t>(w)];
  double wmax = wmin;
  for (std::size_t i = n - static_cast<std::size_t>(w); i < n; ++i) {
    wmin = std::min(wmin, sups[i]);
    wmax = std::max(wmax, sups[i]);
  }
  auto sigma = [&](std::size_t i) {
    return i < stderrs.size() ? stderrs[i] : 0.0;
  };

  // Uncertainty degrades a verdict only when it straddles the comparison
  // that actually decides it.
  if (trending_down && sups[n - 1] < policy.vanish_below) {
    if (sups[n - 1] + 3.0 * sigma(n - 1) >= policy.vanish_below) {
      return Trend::inconclusive;
    }
    return Trend::vanishing;
  }
  if (wmin >= policy.bounded_above && wmax <= policy.stabilize_factor * wmin) {
    for (std::size_t i = n - static_cast<std::size_t>(w); i < n; ++i) {
      if (sups[i] - 3.0 * sigma(i) < policy.bounded_above) {
        return Trend::inconclusive;
      }
    }
    return Trend::bounded;
  }
  return Trend::inconclusive;
}

RatioEstimate pullback_box_ratio(const PullbackSampler& s, cpx a, double r) {
  Pool pool = build_pool(s);
  return ratio_from_pool(pool, s.weight, s.policy, a, r);
}

AnnulusScan vanishing_scan(const PullbackSampler& s, double r,
                           const std::vector<double>& radii, int angular) {
  if (radii.empty() || angular < 1) {
    throw std::invalid_argument("vanishing_scan: need radii and anchors");
  }
  Pool pool = build_pool(s);

  AnnulusScan scan;
  scan.radii = radii;
  scan.sups.assign(radii.size(), 0.0);
  scan.stderrs.assign(radii.size(), 0.0);
  std::vector<bool> flagged(radii.size(), false);

  parallel_over(radii.size(), [&](std::size_t k) {
    double best = -1.0, best_err = 0.0;
    bool best_flag = false;
    for (int j = 0; j < angular; ++j) {
      double th = 2.0 * kPi * j / angular;
      cpx a = radii[k] * cpx(std::cos(th), std::sin(th));
      RatioEstimate est = ratio_from_pool(pool, s.weight, s.policy, a, r);
      if (est.ratio > best) {
        best = est.ratio;
        best_err = est.stderr_;
        best_flag = est.flagged;
      }
    }
    scan.sups[k] = std::max(best, 0.0);
    scan.stderrs[k] = best_err;
    flagged[k] = best_flag;
  });

  std::vector<double> sigma(radii.size(), 0.0);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (flagged[k]) sigma[k] = scan.stderrs[k];
  }
  scan.verdict = classify_trend(scan.sups, sigma, s.policy);
  return scan;
}

AnnulusScan multiplier_decay_scan(const SelfMap& phi,
                                  const std::function<double(cpx)>& u,
                                  const std::vector<double>& radii,
                                  int angular, const VerdictPolicy& policy) {
  phi.require_validated();
  AnnulusScan scan;
  scan.radii = radii;
  scan.sups.assign(radii.size(), 0.0);
  scan.stderrs.assign(radii.size(), 0.0);

  parallel_over(radii.size(), [&](std::size_t k) {
    const double r = radii[k];
    std::vector<double> zre(static_cast<std::size_t>(angular)),
        zim(static_cast<std::size_t>(angular)),
        wre(static_cast<std::size_t>(angular)),
        wim(static_cast<std::size_t>(angular));
    for (int j = 0; j < angular; ++j) {
      double th = 2.0 * kPi * j / angular;
      zre[static_cast<std::size_t>(j)] = r * std::cos(th);
      zim[static_cast<std::size_t>(j)] = r * std::sin(th);
    }
    phi.eval_batch(zre.data(), zim.data(), wre.data(), wim.data(),
                   static_cast<std::size_t>(angular));
    double sup = 0.0;
    for (int j = 0; j < angular; ++j) {
      const std::size_t i = static_cast<std::size_t>(j);
      double uv = u ? u(cpx(zre[i], zim[i])) : 1.0;
      double q = uv * (1.0 - r) /
                 (1.0 - std::hypot(wre[i], wim[i]));
      sup = std::max(sup, q);
    }
    scan.sups[k] = sup;
  });
  scan.verdict = classify_trend(scan.sups, scan.stderrs, policy);
  return scan;
}

std::vector<double> dyadic_annuli(int k_first, int k_last) {
  std::vector<double> out;
  for (int k = k_first; k <= k_last; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
  return out;
}

}  // namespace complab
