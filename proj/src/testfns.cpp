#include "complab/testfns.hpp"

#include <cmath>
#include <stdexcept>

#include "complab/geometry.hpp"
#include "complab/quadrature.hpp"

namespace complab {
namespace {

constexpr int kAngularStart = 2048;
constexpr int kAngularCap = 1 << 18;

// Angular mean of (1 - 2 q cos(th) + q^2)^(-e) over the circle, by
// trapezoid doubling. Rotation invariance has already reduced the kernel
// modulus to the single parameter q = |t| |a| r < 1.
double angular_mean(double q, double e) {
  auto f = [&](double th) {
    return std::pow(1.0 - 2.0 * q * std::cos(th) + q * q, -e);
  };
  // Trapezoid on [0, pi]; the integrand extends evenly and 2pi-periodically,
  // so doubling converges geometrically.
  int n = kAngularStart / 2;
  double h = kPi / n;
  double sum = 0.5 * (f(0.0) + f(kPi));
  for (int j = 1; j < n; ++j) sum += f(h * j);
  double prev = sum * h / kPi;
  while (n < kAngularCap) {
    double mid = 0.0;
    for (int j = 0; j < n; ++j) mid += f(h * (j + 0.5));
    n *= 2;
    h *= 0.5;
    sum += mid;
    double cur = sum * h / kPi;
    if (std::abs(cur - prev) <= 1e-9 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double default_gamma(const DoublingCertificate& cert, double p) {
  return std::max(cert.beta + 2.0, p + 1.0);
}

TestFunction::TestFunction(cpx a, double gamma, double p, RadialWeight w,
                           bool dil, double N)
    : anchor_(a), gamma_(gamma), p_(p), weight_(std::move(w)), dilated_(dil) {
  if (!(p > 0.0)) throw std::invalid_argument("test function: p must be positive");
  const double am = std::abs(a);
  if (am >= 1.0) {
    throw std::invalid_argument("test function: anchor must be interior");
  }
  t_ = dil ? 1.0 - N * (1.0 - am) : 1.0;
  if (std::abs(t_) * am >= 1.0) {
    throw std::invalid_argument(
        "test function: dilated denominator has a singularity in the closed disk");
  }
  n_factor_ = 1.0 - am * am;
  normalization_ = std::pow(weight_.box_mass(a), -1.0 / p);
}

TestFunction TestFunction::plain(cpx anchor, double gamma, double p,
                                 RadialWeight weight) {
  return TestFunction(anchor, gamma, p, std::move(weight), false, 0.0);
}

TestFunction TestFunction::dilated(cpx anchor, double gamma, double p,
                                   RadialWeight weight, double N) {
  return TestFunction(anchor, gamma, p, std::move(weight), true, N);
}

cpx TestFunction::operator()(cpx z) const {
  const cpx den = 1.0 - t_ * std::conj(anchor_) * z;
  if (!(den.real() > 0.0)) {
    // Impossible while |t a z| < 1; a violation means corrupted state.
    throw std::logic_error("test function: denominator left the right half-plane");
  }
  const double s = (gamma_ + 1.0) / p_;
  return std::pow(n_factor_ / den, cpx(s, 0.0)) * normalization_;
}

double TestFunction::norm() const {
  const double e = 0.5 * (gamma_ + 1.0);  // |den|^-(gamma+1) = (|den|^2)^-e
  const double q0 = std::abs(t_) * std::abs(anchor_);
  const double scale =
      std::pow(n_factor_, gamma_ + 1.0) / weight_.box_mass(anchor_);
  const RadialWeight& w = weight_;
  double integral = 2.0 * integrate(
                              [&](double r) {
                                return angular_mean(q0 * r, e) * w.density(r) * r;
                              },
                              0.0, 1.0);
  return std::pow(scale * integral, 1.0 / p_);
}

GapSample kernel_pair_gap(cpx a, cpx z, cpx w, double s, double N, double r0) {
  if (!(s > 1.0)) throw std::invalid_argument("kernel_pair_gap: need s > 1");
  const double am = std::abs(a);
  if (!(1.0 - am < 1.0 / (2.0 * N))) {
    throw std::invalid_argument(
        "kernel_pair_gap: anchor too far from the boundary for this N");
  }
  if (!(rho(z, a) < r0)) {
    throw std::invalid_argument(
        "kernel_pair_gap: z must lie in the rho-ball of radius r0 at a");
  }
  const double tN = 1.0 - N * (1.0 - am);
  auto inv_pow = [s](cpx den) { return std::pow(den, cpx(-s, 0.0)); };
  const cpx az = std::conj(a) * z, aw = std::conj(a) * w;
  const cpx p1 = inv_pow(1.0 - az), p2 = inv_pow(1.0 - aw);
  const cpx p3 = inv_pow(1.0 - tN * az), p4 = inv_pow(1.0 - tN * aw);
  GapSample g;
  g.lhs = std::abs(p1 - p2) + std::abs(p3 - p4);
  g.rhs_scale = rho(z, w) * std::abs(p1);
  return g;
}

}  // namespace complab
