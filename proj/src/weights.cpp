#include "complab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "complab/quadrature.hpp"

namespace complab {
namespace {

constexpr int kTailPanels = 64;  // dyadic panels in u = 1-r
// Upper-doubling certification accepts any finite grid constant up to this
// cap: power-type tails give 2^(slope) which stays far below it, while
// genuinely non-doubling tails overflow the ratio within a few annuli.
constexpr double kDoublingCap = 1e9;
constexpr double kLowerMargin = 1.05;  // lower-doubling gain must exceed this

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

struct RadialWeight::Body {
  enum class Kind { standard, table, shifted } kind;
  std::string spec;

  // standard
  double power = 0.0;
  // table
  std::vector<double> tab_r, tab_w;
  // shifted
  std::shared_ptr<const Body> base;
  double lambda = 0.0;

  // Tail-mass table over dyadic panels u in [2^-(k+1), 2^-k], k = 0..kTailPanels-1,
  // plus the remaining stub below 2^-kTailPanels. suffix[k] holds the tail mass
  // of everything deeper than u = 2^-k.
  std::vector<double> suffix;
  double total = 0.0;

  // Density as a function of u = 1-r. All boundary-adjacent evaluation runs
  // in u, where 1-r^2 = u(2-u) carries no cancellation.
  double density_u(double u) const {
    switch (kind) {
      case Kind::standard:
        return std::pow(u * (2.0 - u), power);
      case Kind::table: {
        double r = 1.0 - u;
        if (r <= tab_r.front()) return tab_w.front();
        if (r >= tab_r.back()) return tab_w.back();
        auto it = std::upper_bound(tab_r.begin(), tab_r.end(), r);
        std::size_t i = static_cast<std::size_t>(it - tab_r.begin());
        double t = (r - tab_r[i - 1]) / (tab_r[i] - tab_r[i - 1]);
        return tab_w[i - 1] + t * (tab_w[i] - tab_w[i - 1]);
      }
      case Kind::shifted:
        return base->density_u(u) / std::pow(u, lambda);
    }
    return 0.0;
  }

  double density(double r) const { return density_u(1.0 - r); }

  void build_tail_table() {
    QuadOptions opt;
    opt.rel_tol = 1e-12;
    std::vector<double> panel(kTailPanels, 0.0);
    for (int k = 0; k < kTailPanels; ++k) {
      double hi = std::ldexp(1.0, -k);
      double lo = std::ldexp(1.0, -(k + 1));
      panel[static_cast<std::size_t>(k)] =
          integrate([this](double u) { return density_u(u); }, lo, hi, opt);
    }
    double stub = integrate([this](double u) { return density_u(u); }, 0.0,
                            std::ldexp(1.0, -kTailPanels), opt);
    suffix.assign(kTailPanels + 1, 0.0);
    suffix[kTailPanels] = stub;
    for (int k = kTailPanels - 1; k >= 0; --k) {
      suffix[static_cast<std::size_t>(k)] =
          panel[static_cast<std::size_t>(k)] + suffix[static_cast<std::size_t>(k) + 1];
    }
    total = 2.0 * integrate([this](double r) { return r * density(r); }, 0.0,
                            1.0, opt);
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw std::invalid_argument("weight has non-finite or vanishing total mass");
    }
  }

  double tail_mass(double r) const {
    if (r >= 1.0) return 0.0;
    if (r < 0.0) throw std::invalid_argument("tail_mass: r must be in [0, 1)");
    double u = 1.0 - r;
    if (u >= 1.0) return suffix[0];
    int k = std::min(static_cast<int>(-std::floor(std::log2(u))), kTailPanels);
    if (k >= kTailPanels) {
      // Deeper than the table: integrate [0, u] directly.
      return integrate([this](double uu) { return density_u(uu); }, 0.0, u);
    }
    double panel_lo = std::ldexp(1.0, -(k + 1));
    double partial =
        integrate([this](double uu) { return density_u(uu); }, panel_lo, u);
    return partial + suffix[static_cast<std::size_t>(k) + 1];
  }
};

RadialWeight::RadialWeight(std::shared_ptr<const Body> body)
    : body_(std::move(body)) {}

RadialWeight RadialWeight::standard_power(double a) {
  if (!(a > -1.0)) {
    throw std::invalid_argument(
        "standard weight exponent must exceed -1 (non-integrable density)");
  }
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::standard;
  b->power = a;
  b->spec = "std:" + fmt_double(a);
  b->build_tail_table();
  return RadialWeight(std::move(b));
}

RadialWeight RadialWeight::from_table(std::vector<double> radii,
                                      std::vector<double> values) {
  if (radii.size() != values.size() || radii.size() < 2) {
    throw std::invalid_argument("weight table needs at least two (r, w) rows");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0.0 || radii[i] >= 1.0) {
      throw std::invalid_argument("weight table radius out of [0, 1): " +
                                  fmt_double(radii[i]));
    }
    if (i > 0 && radii[i] <= radii[i - 1]) {
      throw std::invalid_argument("weight table radii must be strictly increasing");
    }
    if (!(values[i] >= 0.0)) {
      throw std::invalid_argument("weight table density must be nonnegative");
    }
  }
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::table;
  b->tab_r = std::move(radii);
  b->tab_w = std::move(values);
  b->spec = "table:<inline>";
  b->build_tail_table();
  return RadialWeight(std::move(b));
}

RadialWeight RadialWeight::parse(const std::string& spec) {
  if (spec.rfind("std:", 0) == 0) {
    const std::string tok = spec.substr(4);
    std::size_t pos = 0;
    double a = 0.0;
    try {
      a = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("weight spec: cannot parse exponent \"" + tok +
                                  "\" (grammar: std:<alpha> | table:<path>)");
    }
    if (pos != tok.size()) {
      throw std::invalid_argument("weight spec: trailing characters in \"" + tok +
                                  "\" (grammar: std:<alpha> | table:<path>)");
    }
    return standard_power(a);
  }
  if (spec.rfind("table:", 0) == 0) {
    const std::string path = spec.substr(6);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("weight table file not found: " + path);
    std::vector<double> r, w;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double rv, wv;
      if (!(row >> rv >> wv)) {
        throw std::invalid_argument("weight table " + path + ": bad row at line " +
                                    std::to_string(lineno));
      }
      r.push_back(rv);
      w.push_back(wv);
    }
    auto result = from_table(std::move(r), std::move(w));
    // keep the user-facing spec replayable
    const_cast<Body*>(result.body_.get())->spec = spec;
    return result;
  }
  throw std::invalid_argument("weight spec \"" + spec +
                              "\" (grammar: std:<alpha> | table:<path>)");
}

double RadialWeight::density(double r) const { return body_->density(r); }
double RadialWeight::tail_mass(double r) const { return body_->tail_mass(r); }
double RadialWeight::tilde(double r) const {
  return body_->tail_mass(r) / (1.0 - r);
}
double RadialWeight::box_mass(cpx a) const {
  double m = std::abs(a);
  if (m >= 1.0) throw std::invalid_argument("box_mass: anchor must be interior");
  return body_->tail_mass(m) * (1.0 - m);
}

double RadialWeight::moment(int n) const {
  if (n < 0) throw std::invalid_argument("moment: n must be nonnegative");
  const Body& b = *body_;
  try {
    return 2.0 * integrate(
                     [&b, n](double r) {
                       return std::pow(r, 2 * n + 1) * b.density(r);
                     },
                     0.0, 1.0);
  } catch (const QuadratureError& e) {
    throw QuadratureError("moment " + std::to_string(n) + ": " + e.what(), e.lo,
                          e.hi);
  }
}

std::vector<double> RadialWeight::moments(int count) const {
  std::vector<double> m(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) m[static_cast<std::size_t>(n)] = moment(n);
  return m;
}

double RadialWeight::total_mass() const { return body_->total; }

RadialWeight RadialWeight::lambda_shift(double lambda,
                                        const DoublingCertificate& cert) const {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda_shift: lambda must be positive");
  }
  if (!(lambda < cert.alpha)) {
    throw std::invalid_argument(
        "lambda_shift: lambda = " + fmt_double(lambda) +
        " is not below the fitted tail exponent alpha = " + fmt_double(cert.alpha));
  }
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::shifted;
  b->base = body_;
  b->lambda = lambda;
  b->spec = "shifted(" + body_->spec + "," + fmt_double(lambda) + ")";
  b->build_tail_table();
  return RadialWeight(std::move(b));
}

const std::string& RadialWeight::spec() const { return body_->spec; }

std::vector<double> default_certification_grid() {
  std::vector<double> grid;
  grid.reserve(161);
  for (int j = 0; j <= 160; ++j) {
    grid.push_back(1.0 - std::exp2(-j / 8.0));
  }
  return grid;
}

DoublingCertificate doubling_check(const RadialWeight& w,
                                   const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("doubling_check: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] >= 1.0) {
      throw std::invalid_argument("doubling_check: grid point out of [0, 1)");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("doubling_check: grid must be strictly increasing");
    }
  }
  if (grid.back() < 1.0 - std::exp2(-20.0)) {
    throw std::invalid_argument("doubling_check: grid must reach 1 - 2^-20");
  }

  DoublingCertificate cert;
  cert.grid_resolution = static_cast<int>(grid.size());

  // Underflowing tails shrink the usable range rather than poisoning ratios.
  std::vector<double> r_ok, tail;
  for (double r : grid) {
    double t = w.tail_mass(r);
    if (t < 1e-300) break;
    r_ok.push_back(r);
    tail.push_back(t);
  }
  if (r_ok.size() < 8) {
    throw std::invalid_argument("doubling_check: tail mass underflows on the grid");
  }
  cert.max_grid_radius = r_ok.back();

  double c_up = 0.0;
  for (std::size_t i = 0; i < r_ok.size(); ++i) {
    double halfway = w.tail_mass(0.5 * (1.0 + r_ok[i]));
    if (halfway <= 0.0) continue;
    c_up = std::max(c_up, tail[i] / halfway);
  }
  cert.C_upper = c_up;
  cert.in_upper = std::isfinite(c_up) && c_up > 1.0 && c_up < kDoublingCap;

  for (double K : {2.0, 4.0, 8.0, 16.0}) {
    double c_lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r_ok.size(); ++i) {
      double deeper = w.tail_mass(1.0 - (1.0 - r_ok[i]) / K);
      if (deeper <= 0.0) {
        c_lo = std::numeric_limits<double>::infinity();
        break;
      }
      c_lo = std::min(c_lo, tail[i] / deeper);
    }
    if (std::isfinite(c_lo) && c_lo >= kLowerMargin) {
      cert.in_lower = true;
      cert.C_lower = c_lo;
      cert.K = K;
      break;
    }
  }

  // Tail exponents: envelope of wide-baseline log-log slopes on r >= 0.9.
  // Short baselines report the local slope, which for non-power weights
  // drifts away from the asymptotic exponent at the shallow end; a minimum
  // separation of 3.5 in log(1-r) keeps the fit asymptotic.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < r_ok.size(); ++i) {
    if (r_ok[i] >= 0.9) {
      xs.push_back(std::log(1.0 - r_ok[i]));
      ys.push_back(std::log(tail[i]));
    }
  }
  double lo_slope = std::numeric_limits<double>::infinity();
  double hi_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (std::abs(xs[i] - xs[j]) < 3.5) continue;
      double s = (ys[i] - ys[j]) / (xs[i] - xs[j]);
      lo_slope = std::min(lo_slope, s);
      hi_slope = std::max(hi_slope, s);
    }
  }
  if (std::isfinite(lo_slope)) {
    cert.alpha = lo_slope;
    cert.beta = hi_slope;
  }
  return cert;
}

DoublingCertificate doubling_check(const RadialWeight& w) {
  return doubling_check(w, default_certification_grid());
}

RadialWeight lambda_shift(const RadialWeight& w, double lambda) {
  return w.lambda_shift(lambda, doubling_check(w));
}

}  // namespace complab
