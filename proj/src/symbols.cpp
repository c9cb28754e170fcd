#include "complab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "complab/fft.hpp"
#include "complab/simd.hpp"

namespace complab {
namespace {

constexpr int kBoundaryGrid = 4096;
constexpr int kInteriorSamples = 10000;
constexpr double kBoundarySlack = 1e-12;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_cpx(cpx z) {
  if (z.imag() == 0.0) return fmt_double(z.real());
  std::string s = fmt_double(z.real());
  if (z.imag() >= 0.0) s += "+";
  return s + fmt_double(z.imag()) + "i";
}

cpx parse_complex(const std::string& tok) {
  // Accepts re, imi, re+imi, re-imi, i, -i.
  std::string t = tok;
  if (t.empty()) throw std::invalid_argument("empty complex literal");
  auto parse_real = [](const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number");
    return v;
  };
  try {
    if (t.back() != 'i') return cpx(parse_real(t), 0.0);
    t.pop_back();
    // Split at the last +/- that is not an exponent sign and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
      if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) {
      if (t.empty() || t == "+") return cpx(0.0, 1.0);
      if (t == "-") return cpx(0.0, -1.0);
      return cpx(0.0, parse_real(t));
    }
    std::string im = t.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return cpx(parse_real(t.substr(0, split)), parse_real(im));
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse complex literal \"" + tok + "\"");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

cpx cpow_int(cpx base, int n) {
  cpx acc(1.0, 0.0);
  cpx b = base;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) acc *= b;
    b *= b;
  }
  return acc;
}

}  // namespace

struct SelfMap::Body {
  enum class Kind { dilation, polynomial, linfrac, composed } kind;
  std::string spec;
  cpx s{};                   // dilation
  std::vector<cpx> coeffs;   // polynomial
  cpx a{}, b{}, c{}, d{};    // linfrac
  std::shared_ptr<const Body> outer, inner;
  cpx origin{};
  ValidationReport report;

  void eval(const double* zre, const double* zim, double* wre, double* wim,
            std::size_t n) const {
    const auto& k = simd::kernels();
    switch (kind) {
      case Kind::dilation: {
        const cpx lin[2] = {cpx(0.0, 0.0), s};
        k.poly_eval(lin, 2, zre, zim, wre, wim, n);
        return;
      }
      case Kind::polynomial:
        k.poly_eval(coeffs.data(), coeffs.size(), zre, zim, wre, wim, n);
        return;
      case Kind::linfrac:
        k.linfrac_eval(a, b, c, d, zre, zim, wre, wim, n);
        return;
      case Kind::composed: {
        std::vector<double> tre(n), tim(n);
        inner->eval(zre, zim, tre.data(), tim.data(), n);
        outer->eval(tre.data(), tim.data(), wre, wim, n);
        return;
      }
    }
  }

  cpx eval1(cpx z) const {
    double wr, wi;
    const double zr = z.real(), zi = z.imag();
    eval(&zr, &zi, &wr, &wi, 1);
    return cpx(wr, wi);
  }

  cpx deriv(cpx z) const {
    switch (kind) {
      case Kind::dilation:
        return s;
      case Kind::polynomial: {
        cpx acc(0.0, 0.0);
        for (std::size_t j = coeffs.size(); j-- > 1;) {
          acc = acc * z + static_cast<double>(j) * coeffs[j];
        }
        return acc;
      }
      case Kind::linfrac: {
        cpx den = c * z + d;
        return (a * d - b * c) / (den * den);
      }
      case Kind::composed:
        return outer->deriv(inner->eval1(z)) * inner->deriv(z);
    }
    return {};
  }

  void validate() {
    report = ValidationReport{};
    if (kind == Kind::linfrac && std::abs(c) > 0.0) {
      cpx pole = -d / c;
      if (std::abs(pole) <= 1.0 + 1e-9) {
        report.pass = false;
        report.singularity = pole;
        report.max_boundary_modulus =
            std::numeric_limits<double>::infinity();
        return;
      }
    }
    std::vector<double> zre(kBoundaryGrid), zim(kBoundaryGrid);
    std::vector<double> wre(kBoundaryGrid), wim(kBoundaryGrid);
    for (int j = 0; j < kBoundaryGrid; ++j) {
      double th = 2.0 * kPi * j / kBoundaryGrid;
      zre[static_cast<std::size_t>(j)] = std::cos(th);
      zim[static_cast<std::size_t>(j)] = std::sin(th);
    }
    eval(zre.data(), zim.data(), wre.data(), wim.data(), kBoundaryGrid);
    double bmax = 0.0;
    for (int j = 0; j < kBoundaryGrid; ++j) {
      double m = std::hypot(wre[static_cast<std::size_t>(j)],
                            wim[static_cast<std::size_t>(j)]);
      if (!std::isfinite(m)) {
        report.pass = false;
        report.max_boundary_modulus = std::numeric_limits<double>::infinity();
        report.singularity = cpx(zre[static_cast<std::size_t>(j)],
                                 zim[static_cast<std::size_t>(j)]);
        return;
      }
      bmax = std::max(bmax, m);
    }
    Rng rng(0x5e1f'0001u);
    std::vector<double> ire(kInteriorSamples), iim(kInteriorSamples);
    for (int j = 0; j < kInteriorSamples; ++j) {
      cpx z = rng.disk_point();
      ire[static_cast<std::size_t>(j)] = z.real();
      iim[static_cast<std::size_t>(j)] = z.imag();
    }
    std::vector<double> ore(kInteriorSamples), oim(kInteriorSamples);
    eval(ire.data(), iim.data(), ore.data(), oim.data(), kInteriorSamples);
    double imax = 0.0;
    for (int j = 0; j < kInteriorSamples; ++j) {
      imax = std::max(imax, std::hypot(ore[static_cast<std::size_t>(j)],
                                       oim[static_cast<std::size_t>(j)]));
    }
    report.max_boundary_modulus = bmax;
    report.max_interior_modulus = imax;
    report.pass = bmax <= 1.0 + kBoundarySlack && imax < 1.0;
    origin = eval1(cpx(0.0, 0.0));
  }
};

SelfMap::SelfMap(std::shared_ptr<const Body> body) : body_(std::move(body)) {}

SelfMap SelfMap::dilation(cpx s) {
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::dilation;
  b->s = s;
  b->spec = "dilate:" + fmt_cpx(s);
  b->validate();
  return SelfMap(std::move(b));
}

SelfMap SelfMap::polynomial(std::vector<cpx> coeffs) {
  if (coeffs.empty()) {
    throw std::invalid_argument("polynomial self-map needs coefficients");
  }
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::polynomial;
  b->coeffs = std::move(coeffs);
  std::string s = "poly:";
  for (std::size_t i = 0; i < b->coeffs.size(); ++i) {
    if (i) s += ",";
    s += fmt_cpx(b->coeffs[i]);
  }
  b->spec = s;
  b->validate();
  return SelfMap(std::move(b));
}

SelfMap SelfMap::linear_fractional(cpx a, cpx bb, cpx c, cpx d) {
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::linfrac;
  b->a = a;
  b->b = bb;
  b->c = c;
  b->d = d;
  b->spec = "linfrac:" + fmt_cpx(a) + "," + fmt_cpx(bb) + "," + fmt_cpx(c) +
            "," + fmt_cpx(d);
  b->validate();
  return SelfMap(std::move(b));
}

SelfMap SelfMap::compose(const SelfMap& outer, const SelfMap& inner) {
  auto b = std::make_shared<Body>();
  b->kind = Body::Kind::composed;
  b->outer = outer.body_;
  b->inner = inner.body_;
  b->spec = "compose(" + outer.spec() + ";" + inner.spec() + ")";
  b->validate();
  return SelfMap(std::move(b));
}

SelfMap SelfMap::parse(const std::string& spec) {
  auto named = [&](const char* name, std::vector<cpx> coeffs) {
    SelfMap m = polynomial(std::move(coeffs));
    const_cast<Body*>(m.body_.get())->spec = name;
    return m;
  };
  if (spec == "halfmap") return named("halfmap", {cpx(0.5), cpx(0.5)});
  if (spec == "zhalfmap") return named("zhalfmap", {cpx(0.0), cpx(0.5), cpx(0.5)});
  if (spec == "tangentmap") {
    return named("tangentmap", {cpx(0.625), cpx(0.25), cpx(0.125)});
  }
  try {
    if (spec.rfind("dilate:", 0) == 0) {
      return dilation(parse_complex(spec.substr(7)));
    }
    if (spec.rfind("rot:", 0) == 0) {
      std::string tok = spec.substr(4);
      std::size_t pos = 0;
      double th = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("bad angle");
      return dilation(cpx(std::cos(th), std::sin(th)));
    }
    if (spec.rfind("linfrac:", 0) == 0) {
      auto parts = split(spec.substr(8), ',');
      if (parts.size() != 4) {
        throw std::invalid_argument("linfrac needs four coefficients");
      }
      return linear_fractional(parse_complex(parts[0]), parse_complex(parts[1]),
                               parse_complex(parts[2]), parse_complex(parts[3]));
    }
    if (spec.rfind("poly:", 0) == 0) {
      auto parts = split(spec.substr(5), ',');
      std::vector<cpx> coeffs;
      for (const auto& p : parts) coeffs.push_back(parse_complex(p));
      return polynomial(std::move(coeffs));
    }
    if (spec.rfind("compose(", 0) == 0 && spec.back() == ')') {
      std::string body = spec.substr(8, spec.size() - 9);
      int depth = 0;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '(') ++depth;
        if (body[i] == ')') --depth;
        if (body[i] == ';' && depth == 0) {
          return compose(parse(body.substr(0, i)), parse(body.substr(i + 1)));
        }
      }
      throw std::invalid_argument("compose needs two ;-separated specs");
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("symbol spec \"" + spec + "\": " + e.what());
  }
  throw std::invalid_argument(
      "symbol spec \"" + spec +
      "\" (grammar: dilate:<s> | rot:<theta> | linfrac:<a>,<b>,<c>,<d> | "
      "poly:<c0>,... | halfmap | zhalfmap | tangentmap | compose(<f>;<g>))");
}

cpx SelfMap::operator()(cpx z) const { return body_->eval1(z); }
cpx SelfMap::derivative(cpx z) const { return body_->deriv(z); }

void SelfMap::eval_batch(const double* zre, const double* zim, double* wre,
                         double* wim, std::size_t n) const {
  body_->eval(zre, zim, wre, wim, n);
}

const ValidationReport& SelfMap::validation() const { return body_->report; }

void SelfMap::require_validated() const {
  if (!validated()) {
    std::string what = "self-map " + spec() + " failed validation";
    if (body_->report.singularity) {
      what += " (singularity near " + fmt_cpx(*body_->report.singularity) + ")";
    } else {
      what += " (max modulus " + fmt_double(body_->report.max_boundary_modulus) +
              ")";
    }
    throw std::invalid_argument(what);
  }
}

cpx SelfMap::origin_image() const { return body_->origin; }
const std::string& SelfMap::spec() const { return body_->spec; }

bool SelfMap::is_dilation() const {
  return body_->kind == Body::Kind::dilation;
}
cpx SelfMap::dilation_factor() const { return body_->s; }
const std::vector<cpx>* SelfMap::poly_coeffs() const {
  return body_->kind == Body::Kind::polynomial ? &body_->coeffs : nullptr;
}

ValidationReport selfmap_validate(const SelfMap& phi) {
  return phi.validation();
}

namespace {

// Truncated product of coefficient sequences.
std::vector<cpx> conv_trunc(const std::vector<cpx>& p, const std::vector<cpx>& q,
                            int max_degree) {
  std::vector<cpx> out(static_cast<std::size_t>(max_degree) + 1, cpx(0.0));
  for (std::size_t i = 0; i < p.size() && i <= static_cast<std::size_t>(max_degree); ++i) {
    if (p[i] == cpx(0.0)) continue;
    const std::size_t jmax =
        std::min(q.size(), static_cast<std::size_t>(max_degree) + 1 - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

struct CircleSampling {
  int size = 0;
  double radius1 = 0.0, radius2 = 0.0;
  std::vector<cpx> values1, values2;  // phi on the two circles
};

CircleSampling sample_circles(const SelfMap& phi, int max_degree) {
  CircleSampling cs;
  int want = std::max(4 * (max_degree + 1), 512);
  cs.size = 1;
  while (cs.size < want) cs.size <<= 1;
  // Radii chosen so aliasing (radius^size) sits below double precision for
  // the primary circle while the amplification radius^-max_degree stays
  // within about four decades.
  cs.radius1 = std::exp(-36.8 / cs.size);
  cs.radius2 = std::exp(-30.0 / cs.size);
  for (double radius : {cs.radius1, cs.radius2}) {
    std::vector<double> zre(static_cast<std::size_t>(cs.size)),
        zim(static_cast<std::size_t>(cs.size));
    for (int j = 0; j < cs.size; ++j) {
      double th = 2.0 * kPi * j / cs.size;
      zre[static_cast<std::size_t>(j)] = radius * std::cos(th);
      zim[static_cast<std::size_t>(j)] = radius * std::sin(th);
    }
    std::vector<double> wre(static_cast<std::size_t>(cs.size)),
        wim(static_cast<std::size_t>(cs.size));
    phi.eval_batch(zre.data(), zim.data(), wre.data(), wim.data(),
                   static_cast<std::size_t>(cs.size));
    auto& dst = (radius == cs.radius1) ? cs.values1 : cs.values2;
    dst.resize(static_cast<std::size_t>(cs.size));
    for (int j = 0; j < cs.size; ++j) {
      dst[static_cast<std::size_t>(j)] = cpx(wre[static_cast<std::size_t>(j)],
                                             wim[static_cast<std::size_t>(j)]);
    }
  }
  return cs;
}

std::vector<cpx> dft_coefficients(std::vector<cpx> samples, double radius,
                                  int max_degree) {
  const std::size_t n = samples.size();
  fft_pow2(samples, false);
  std::vector<cpx> out(static_cast<std::size_t>(max_degree) + 1);
  double rpow = 1.0;
  for (int m = 0; m <= max_degree; ++m) {
    out[static_cast<std::size_t>(m)] =
        samples[static_cast<std::size_t>(m)] / (static_cast<double>(n) * rpow);
    rpow *= radius;
  }
  return out;
}

void check_radius_agreement(const std::vector<cpx>& c1,
                            const std::vector<cpx>& c2, const SelfMap& phi) {
  for (std::size_t m = 0; m < c1.size(); ++m) {
    double diff = std::abs(c1[m] - c2[m]);
    if (diff > 1e-10 * std::max(1.0, std::abs(c1[m]))) {
      throw std::runtime_error(
          "taylor_coeffs(" + phi.spec() + "): circle samplings disagree at degree " +
          std::to_string(m) + " by " + fmt_double(diff) +
          "; increase the sample count");
    }
  }
}

}  // namespace

std::vector<cpx> taylor_coeffs(const SelfMap& phi, int power, int max_degree) {
  if (power < 0 || max_degree < 0) {
    throw std::invalid_argument("taylor_coeffs: power and degree must be >= 0");
  }
  phi.require_validated();
  const std::size_t width = static_cast<std::size_t>(max_degree) + 1;
  if (phi.is_dilation()) {
    std::vector<cpx> out(width, cpx(0.0));
    if (power <= max_degree) {
      out[static_cast<std::size_t>(power)] = cpow_int(phi.dilation_factor(), power);
    }
    return out;
  }
  if (const auto* pc = phi.poly_coeffs()) {
    std::vector<cpx> acc(width, cpx(0.0));
    acc[0] = cpx(1.0);
    for (int i = 0; i < power; ++i) acc = conv_trunc(acc, *pc, max_degree);
    return acc;
  }
  CircleSampling cs = sample_circles(phi, max_degree);
  auto powered = [&](const std::vector<cpx>& vals) {
    std::vector<cpx> p(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) p[j] = cpow_int(vals[j], power);
    return p;
  };
  auto c1 = dft_coefficients(powered(cs.values1), cs.radius1, max_degree);
  auto c2 = dft_coefficients(powered(cs.values2), cs.radius2, max_degree);
  check_radius_agreement(c1, c2, phi);
  return c1;
}

std::vector<std::vector<cpx>> taylor_power_table(const SelfMap& phi,
                                                 int max_power,
                                                 int max_degree) {
  phi.require_validated();
  std::vector<std::vector<cpx>> table(static_cast<std::size_t>(max_power));
  const std::size_t width = static_cast<std::size_t>(max_degree) + 1;
  if (phi.is_dilation()) {
    cpx spow(1.0);
    for (int n = 0; n < max_power; ++n) {
      auto& col = table[static_cast<std::size_t>(n)];
      col.assign(width, cpx(0.0));
      if (n <= max_degree) col[static_cast<std::size_t>(n)] = spow;
      spow *= phi.dilation_factor();
    }
    return table;
  }
  if (const auto* pc = phi.poly_coeffs()) {
    std::vector<cpx> acc(width, cpx(0.0));
    acc[0] = cpx(1.0);
    for (int n = 0; n < max_power; ++n) {
      table[static_cast<std::size_t>(n)] = acc;
      acc = conv_trunc(acc, *pc, max_degree);
    }
    return table;
  }
  CircleSampling cs = sample_circles(phi, max_degree);
  std::vector<cpx> p1(cs.values1.size(), cpx(1.0));
  std::vector<cpx> p2(cs.values2.size(), cpx(1.0));
  for (int n = 0; n < max_power; ++n) {
    auto c1 = dft_coefficients(p1, cs.radius1, max_degree);
    auto c2 = dft_coefficients(p2, cs.radius2, max_degree);
    check_radius_agreement(c1, c2, phi);
    table[static_cast<std::size_t>(n)] = std::move(c1);
    for (std::size_t j = 0; j < p1.size(); ++j) p1[j] *= cs.values1[j];
    for (std::size_t j = 0; j < p2.size(); ++j) p2[j] *= cs.values2[j];
  }
  return table;
}

double julia_quotient(const SelfMap& phi, cpx zeta, double t) {
  phi.require_validated();
  return (1.0 - std::abs(phi(t * zeta))) / (1.0 - t);
}

bool same_first_order_data(const FirstOrderData& a, const FirstOrderData& b) {
  if (a.kind != DerivativeKind::finite || b.kind != DerivativeKind::finite) {
    return false;
  }
  if (std::abs(a.image - b.image) > kEtaMatchTol) return false;
  double scale = std::max(a.derivative_modulus, b.derivative_modulus);
  return std::abs(a.derivative_modulus - b.derivative_modulus) <=
         kDerivMatchRelTol * scale;
}

FirstOrderData angular_derivative(const SelfMap& phi, cpx zeta) {
  phi.require_validated();
  zeta /= std::abs(zeta);
  FirstOrderData out;
  out.boundary_point = zeta;

  constexpr int kFirst = 4, kLast = 40, kWindow = 30;
  double q[kLast + 1];
  for (int k = kFirst; k <= kLast; ++k) {
    const double u = std::ldexp(1.0, -k);
    q[k] = (1.0 - std::abs(phi((1.0 - u) * zeta))) / u;
  }
  double qmin = q[kWindow], qmax = q[kWindow];
  for (int k = kWindow; k <= kLast; ++k) {
    qmin = std::min(qmin, q[k]);
    qmax = std::max(qmax, q[k]);
  }
  if (qmax > 1e6 && q[kLast] > q[kWindow]) {
    out.kind = DerivativeKind::infinite;
    return out;
  }
  if (qmax > 10.0 * qmin) {
    out.kind = DerivativeKind::inconclusive;
    return out;
  }
  out.kind = DerivativeKind::finite;
  out.derivative_modulus = qmin;
  cpx tip = phi((1.0 - std::ldexp(1.0, -kLast)) * zeta);
  out.image = tip / std::abs(tip);
  return out;
}

std::vector<ContactPoint> contact_scan(const SelfMap& phi,
                                       int angular_resolution) {
  phi.require_validated();
  if (angular_resolution < 4) {
    throw std::invalid_argument("contact_scan: resolution too small");
  }
  auto at_angle = [](double th) { return cpx(std::cos(th), std::sin(th)); };
  std::map<double, FirstOrderData> hits;  // keyed by angle in [0, 2pi)
  const double step = 2.0 * kPi / angular_resolution;
  std::vector<double> coarse_hits;
  for (int j = 0; j < angular_resolution; ++j) {
    double th = step * j;
    FirstOrderData d = angular_derivative(phi, at_angle(th));
    if (d.kind == DerivativeKind::finite) {
      hits[th] = d;
      coarse_hits.push_back(th);
    }
  }
  // One refinement level around each coarse hit.
  for (double th : coarse_hits) {
    for (double nb : {th - 0.5 * step, th + 0.5 * step}) {
      double wrapped = std::fmod(nb + 2.0 * kPi, 2.0 * kPi);
      FirstOrderData d = angular_derivative(phi, at_angle(wrapped));
      if (d.kind == DerivativeKind::finite) hits[wrapped] = d;
    }
  }
  std::vector<ContactPoint> out;
  out.reserve(hits.size());
  for (const auto& [th, d] : hits) {
    out.push_back(ContactPoint{at_angle(th), d});
  }
  return out;
}

}  // namespace complab
