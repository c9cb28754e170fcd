#include "complab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "complab/report.hpp"
#include "complab/simd.hpp"

namespace complab {
namespace {

Trend path_values_trend(const std::vector<double>& values,
                        const VerdictPolicy& policy) {
  std::vector<double> zeros(values.size(), 0.0);
  return classify_trend(values, zeros, policy);
}

constexpr double kLambdaTol = 1e-12;

bool lambda_is(cpx l, double target) {
  return std::abs(l - cpx(target, 0.0)) <= kLambdaTol;
}

}  // namespace

double moorhouse_quantity(const SelfMap& phi, const SelfMap& psi, cpx z) {
  const double zre = z.real(), zim = z.imag();
  double fre, fim, gre, gim;
  phi.eval_batch(&zre, &zim, &fre, &fim, 1);
  psi.eval_batch(&zre, &zim, &gre, &gim, 1);
  double out;
  simd::kernels().moorhouse(&zre, &zim, &fre, &fim, &gre, &gim, &out, 1);
  return out;
}

CriterionReport boundary_limsup(const std::function<double(cpx)>& quantity,
                                const std::string& name,
                                const LimsupOptions& opt) {
  CriterionReport report;
  report.quantity_name = name;
  report.annuli = dyadic_annuli(opt.k_first, opt.k_last);
  report.sups.reserve(report.annuli.size());
  for (double r : report.annuli) {
    double sup = 0.0;
    for (int j = 0; j < opt.angular; ++j) {
      double th = 2.0 * kPi * j / opt.angular;
      sup = std::max(sup, quantity(r * cpx(std::cos(th), std::sin(th))));
    }
    report.sups.push_back(sup);
  }
  for (const auto& [zeta, aperture] : opt.path_specs) {
    ApproachPath path = approach_path(zeta, aperture, opt.path_samples);
    PathTail tail;
    tail.target = path.target;
    tail.aperture = aperture;
    tail.values.reserve(path.samples.size());
    for (cpx z : path.samples) tail.values.push_back(quantity(z));
    tail.verdict = path_values_trend(tail.values, opt.policy);
    report.paths.push_back(std::move(tail));
  }
  std::vector<double> zeros(report.sups.size(), 0.0);
  report.verdict = classify_trend(report.sups, zeros, opt.policy);
  report.policy = opt.policy;
  report.parameters["k_first"] = opt.k_first;
  report.parameters["k_last"] = opt.k_last;
  report.parameters["angular"] = opt.angular;
  report.parameters["path_samples"] = opt.path_samples;
  return report;
}

double essential_norm_lower_bound(
    const std::vector<std::pair<cpx, SelfMap>>& terms, cpx zeta,
    const DoublingCertificate& cert, double p) {
  if (terms.empty()) {
    throw std::invalid_argument("essential_norm_lower_bound: empty term list");
  }
  std::vector<FirstOrderData> data;
  std::string offenders;
  for (const auto& [lambda, phi] : terms) {
    (void)lambda;
    FirstOrderData d = angular_derivative(phi, zeta);
    if (d.kind == DerivativeKind::inconclusive) {
      if (!offenders.empty()) offenders += ", ";
      offenders += phi.spec();
    }
    data.push_back(d);
  }
  if (!offenders.empty()) {
    throw std::runtime_error(
        "essential_norm_lower_bound: inconclusive angular derivative for " +
        offenders);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (data[i].kind != DerivativeKind::finite) continue;
    cpx sum(0.0);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (same_first_order_data(data[i], data[j])) sum += terms[j].first;
    }
    double bound =
        std::pow(std::abs(sum), p) /
        std::pow(data[i].derivative_modulus, cert.beta + 1.0);
    best = std::max(best, bound);
  }
  return best;
}

CancellationReport cancellation_conditions(
    const std::vector<std::pair<cpx, SelfMap>>& terms, int boundary_grid) {
  if (terms.empty()) {
    throw std::invalid_argument("cancellation_conditions: empty term list");
  }
  CancellationReport report;

  report.difference_shape = terms.size() >= 2 && lambda_is(terms[0].first, 1.0);
  for (std::size_t j = 1; j < terms.size() && report.difference_shape; ++j) {
    if (!lambda_is(terms[j].first, -1.0)) report.difference_shape = false;
  }

  std::vector<std::set<int>> finite_at(terms.size());
  for (int g = 0; g < boundary_grid; ++g) {
    double th = 2.0 * kPi * g / boundary_grid;
    cpx zeta(std::cos(th), std::sin(th));
    std::vector<FirstOrderData> data(terms.size());
    bool unresolved = false;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      data[j] = angular_derivative(terms[j].second, zeta);
      if (data[j].kind == DerivativeKind::inconclusive) unresolved = true;
    }
    if (unresolved) {
      report.unresolved.push_back(zeta);
      continue;
    }
    CancellationPoint point;
    point.zeta = zeta;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (data[j].kind != DerivativeKind::finite) continue;
      finite_at[j].insert(g);
      bool placed = false;
      for (auto& cls : point.classes) {
        FirstOrderData rep;
        rep.kind = DerivativeKind::finite;
        rep.image = cls.eta;
        rep.derivative_modulus = cls.deriv;
        if (same_first_order_data(rep, data[j])) {
          cls.lambda_sum += terms[j].first;
          cls.members.push_back(static_cast<int>(j));
          placed = true;
          break;
        }
      }
      if (!placed) {
        DataClass cls;
        cls.eta = data[j].image;
        cls.deriv = data[j].derivative_modulus;
        cls.lambda_sum = terms[j].first;
        cls.members = {static_cast<int>(j)};
        point.classes.push_back(std::move(cls));
      }
    }
    if (point.classes.empty()) continue;
    for (const auto& cls : point.classes) {
      if (std::abs(cls.lambda_sum) > 1e-6) point.pass = false;
    }
    if (!point.pass) report.pass = false;
    report.points.push_back(std::move(point));
  }

  if (report.difference_shape) {
    for (std::size_t i = 1; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        std::vector<int> overlap;
        std::set_intersection(finite_at[i].begin(), finite_at[i].end(),
                              finite_at[j].begin(), finite_at[j].end(),
                              std::back_inserter(overlap));
        if (!overlap.empty()) report.disjoint_ok = false;
      }
    }
    std::set<int> uni;
    for (std::size_t j = 1; j < terms.size(); ++j) {
      uni.insert(finite_at[j].begin(), finite_at[j].end());
    }
    report.coverage_ok = uni == finite_at[0];
  }
  return report;
}

const char* compactness_name(Compactness c) {
  switch (c) {
    case Compactness::compact:
      return "COMPACT";
    case Compactness::not_compact:
      return "NOT-COMPACT";
    case Compactness::inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

SymbolCompactnessProxy single_symbol_proxy(const SelfMap& phi,
                                           const RadialWeight& w, int dim) {
  SymbolCompactnessProxy proxy;
  proxy.contacts_empty = contact_scan(phi, 512).empty();
  TruncatedOperator op = composition_matrix(phi, w, dim);
  std::vector<double> tails = essnorm_proxy(op, {16, 128});
  proxy.proxy_decay = tails[1] > 0.0
                          ? tails[0] / tails[1]
                          : std::numeric_limits<double>::infinity();
  proxy.compact = proxy.contacts_empty && proxy.proxy_decay >= 4.0;
  return proxy;
}

namespace {

json proxy_json(const SymbolCompactnessProxy& p) {
  json j;
  j["contacts_empty"] = p.contacts_empty;
  j["proxy_decay"] =
      std::isfinite(p.proxy_decay) ? json(p.proxy_decay) : json("inf");
  j["compact_proxy"] = p.compact;
  return j;
}

json cancellation_json(const CancellationReport& r) {
  json j;
  j["pass"] = r.pass;
  json pts = json::array();
  for (const auto& p : r.points) {
    json jp;
    jp["zeta"] = complex_json(p.zeta);
    json cls = json::array();
    for (const auto& c : p.classes) {
      json jc;
      jc["eta"] = complex_json(c.eta);
      jc["deriv"] = c.deriv;
      jc["lambda_sum"] = complex_json(c.lambda_sum);
      jc["members"] = c.members;
      cls.push_back(jc);
    }
    jp["classes"] = cls;
    jp["pass"] = p.pass;
    pts.push_back(jp);
  }
  j["points"] = pts;
  j["unresolved_count"] = r.unresolved.size();
  if (r.difference_shape) {
    j["difference_shape"] = true;
    j["disjoint"] = r.disjoint_ok;
    j["coverage"] = r.coverage_ok;
  }
  return j;
}

}  // namespace

json PairVerdict::condition_pair_json() const {
  json j;
  j["lambda1"] = complex_json(lambda1);
  j["lambda2"] = complex_json(lambda2);
  j["lambda_sum_zero"] = lambda_sum_zero;
  j["scan"] = criterion_report_json(moorhouse_scan);
  j["holds"] = cond_pair;
  return j;
}

json PairVerdict::to_json() const {
  json j;
  j["verdict"] = compactness_name(verdict);
  j["p"] = p;
  json ci;
  ci["phi"] = proxy_json(phi_proxy);
  ci["psi"] = proxy_json(psi_proxy);
  ci["holds"] = cond_individual;
  j["condition_individual"] = ci;
  j["condition_pair"] = condition_pair_json();
  j["cancellation"] = cancellation_json(cancellation);
  j["params"] = parameters;
  return j;
}

PairVerdict pair_compactness_verdict(const SelfMap& phi, const SelfMap& psi,
                                     cpx lambda1, cpx lambda2,
                                     const RadialWeight& w, double p,
                                     int proxy_dim) {
  phi.require_validated();
  psi.require_validated();
  PairVerdict v;
  v.lambda1 = lambda1;
  v.lambda2 = lambda2;
  v.p = p;
  v.lambda_sum_zero = std::abs(lambda1 + lambda2) <= kLambdaTol;

  v.phi_proxy = single_symbol_proxy(phi, w, proxy_dim);
  v.psi_proxy = single_symbol_proxy(psi, w, proxy_dim);
  v.cond_individual = v.phi_proxy.compact && v.psi_proxy.compact;

  LimsupOptions opt;
  std::set<double> path_angles;
  for (const auto& c : contact_scan(phi, 512)) {
    path_angles.insert(std::arg(c.zeta));
  }
  for (const auto& c : contact_scan(psi, 512)) {
    path_angles.insert(std::arg(c.zeta));
  }
  for (double th : path_angles) {
    cpx zeta(std::cos(th), std::sin(th));
    opt.path_specs.emplace_back(zeta, 2.0);
    opt.path_specs.emplace_back(zeta, 8.0);
  }
  v.moorhouse_scan = boundary_limsup(
      [&](cpx z) { return moorhouse_quantity(phi, psi, z); }, "moorhouse", opt);
  v.moorhouse_scan.parameters["phi"] = phi.spec();
  v.moorhouse_scan.parameters["psi"] = psi.spec();
  v.cond_pair =
      v.lambda_sum_zero && v.moorhouse_scan.verdict == Trend::vanishing;

  v.cancellation =
      cancellation_conditions({{lambda1, phi}, {lambda2, psi}}, 512);

  const Trend scan = v.moorhouse_scan.verdict;
  if (v.cond_individual || v.cond_pair) {
    v.verdict = Compactness::compact;
  } else if (!v.cancellation.pass) {
    v.verdict = Compactness::not_compact;
  } else if ((!v.lambda_sum_zero || scan == Trend::bounded) &&
             !v.cond_individual) {
    v.verdict = Compactness::not_compact;
  } else {
    v.verdict = Compactness::inconclusive;
  }

  v.parameters["phi"] = phi.spec();
  v.parameters["psi"] = psi.spec();
  v.parameters["weight"] = w.spec();
  v.parameters["p"] = p;
  v.parameters["proxy_dim"] = proxy_dim;
  return v;
}

json CombinationVerdict::to_json() const {
  json j;
  j["verdict"] = compactness_name(verdict);
  j["hypothesis_noncompact"] = hypothesis_noncompact_ok;
  j["lambdas_all_one"] = lambdas_all_one;
  j["disjoint"] = disjoint_ok;
  j["coverage"] = coverage_ok;
  json scans = json::array();
  for (const auto& s : local_scans) {
    json js;
    js["zeta"] = complex_json(s.zeta);
    js["term"] = s.term_index;
    json paths = json::array();
    for (const auto& p : s.paths) paths.push_back(path_tail_json(p));
    js["paths"] = paths;
    js["verdict"] = trend_name(s.verdict);
    scans.push_back(js);
  }
  j["local_scans"] = scans;
  j["unresolved_count"] = unresolved.size();
  j["params"] = parameters;
  return j;
}

CombinationVerdict combination_compactness_verdict(
    const SelfMap& phi, const std::vector<std::pair<cpx, SelfMap>>& terms,
    const RadialWeight& w, int boundary_grid, int proxy_dim) {
  if (terms.empty()) {
    throw std::invalid_argument("combination verdict: empty term list");
  }
  phi.require_validated();
  for (const auto& t : terms) t.second.require_validated();

  CombinationVerdict v;

  v.hypothesis_noncompact_ok = !single_symbol_proxy(phi, w, proxy_dim).compact;
  for (const auto& t : terms) {
    if (single_symbol_proxy(t.second, w, proxy_dim).compact) {
      v.hypothesis_noncompact_ok = false;
    }
  }

  v.lambdas_all_one = true;
  for (const auto& t : terms) {
    if (!lambda_is(t.first, 1.0)) v.lambdas_all_one = false;
  }

  // Contact sets on the shared uniform grid.
  std::set<int> f_phi;
  std::vector<std::set<int>> f_term(terms.size());
  std::vector<cpx> grid_zeta(static_cast<std::size_t>(boundary_grid));
  for (int g = 0; g < boundary_grid; ++g) {
    double th = 2.0 * kPi * g / boundary_grid;
    grid_zeta[static_cast<std::size_t>(g)] = cpx(std::cos(th), std::sin(th));
    FirstOrderData d = angular_derivative(phi, grid_zeta[static_cast<std::size_t>(g)]);
    if (d.kind == DerivativeKind::inconclusive) {
      v.unresolved.push_back(grid_zeta[static_cast<std::size_t>(g)]);
      continue;
    }
    if (d.kind == DerivativeKind::finite) f_phi.insert(g);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      FirstOrderData dj =
          angular_derivative(terms[j].second, grid_zeta[static_cast<std::size_t>(g)]);
      if (dj.kind == DerivativeKind::inconclusive) {
        v.unresolved.push_back(grid_zeta[static_cast<std::size_t>(g)]);
      } else if (dj.kind == DerivativeKind::finite) {
        f_term[j].insert(g);
      }
    }
  }

  v.disjoint_ok = true;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      std::vector<int> overlap;
      std::set_intersection(f_term[i].begin(), f_term[i].end(),
                            f_term[j].begin(), f_term[j].end(),
                            std::back_inserter(overlap));
      if (!overlap.empty()) v.disjoint_ok = false;
    }
  }
  std::set<int> uni;
  for (const auto& s : f_term) uni.insert(s.begin(), s.end());
  v.coverage_ok = uni == f_phi;

  VerdictPolicy policy;
  bool any_bounded = false, any_unclear = false;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    for (int g : f_term[j]) {
      CombinationVerdict::LocalScan scan;
      scan.zeta = grid_zeta[static_cast<std::size_t>(g)];
      scan.term_index = static_cast<int>(j);
      bool all_vanishing = true;
      bool bounded_here = false;
      for (double aperture : {2.0, 8.0}) {
        ApproachPath path = approach_path(scan.zeta, aperture, 26);
        PathTail tail;
        tail.target = path.target;
        tail.aperture = aperture;
        for (cpx z : path.samples) {
          tail.values.push_back(moorhouse_quantity(phi, terms[j].second, z));
        }
        tail.verdict = path_values_trend(tail.values, policy);
        if (tail.verdict != Trend::vanishing) all_vanishing = false;
        if (tail.verdict == Trend::bounded) bounded_here = true;
        scan.paths.push_back(std::move(tail));
      }
      scan.verdict = all_vanishing ? Trend::vanishing
                     : bounded_here ? Trend::bounded
                                    : Trend::inconclusive;
      if (scan.verdict == Trend::bounded) any_bounded = true;
      if (scan.verdict == Trend::inconclusive) any_unclear = true;
      v.local_scans.push_back(std::move(scan));
    }
  }

  if (!v.lambdas_all_one || !v.disjoint_ok || !v.coverage_ok || any_bounded) {
    v.verdict = Compactness::not_compact;
  } else if (!v.hypothesis_noncompact_ok || any_unclear ||
             !v.unresolved.empty()) {
    v.verdict = Compactness::inconclusive;
  } else {
    v.verdict = Compactness::compact;
  }

  v.parameters["phi"] = phi.spec();
  json jt = json::array();
  for (const auto& t : terms) {
    json e;
    e["lambda"] = complex_json(t.first);
    e["symbol"] = t.second.spec();
    jt.push_back(e);
  }
  v.parameters["terms"] = jt;
  v.parameters["weight"] = w.spec();
  v.parameters["boundary_grid"] = boundary_grid;
  v.parameters["proxy_dim"] = proxy_dim;
  return v;
}

}  // namespace complab
