#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace complab {

using cpx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Seeded random stream. All randomness in the library goes through this
/// wrapper so that results are reproducible across platforms: raw engine
/// output is mapped to doubles by hand instead of through the
/// implementation-defined standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Area-uniform point of the disk of the given radius.
  cpx disk_point(double max_radius = 1.0) {
    double r = max_radius * std::sqrt(uniform());
    double th = uniform(0.0, 2.0 * kPi);
    return cpx(r * std::cos(th), r * std::sin(th));
  }

  /// Point with 1-|z| distributed log-uniformly in [10^-decades, 1].
  /// Concentrates samples toward the boundary.
  cpx boundary_biased_point(double decades) {
    double u = uniform();
    double r = 1.0 - std::pow(10.0, -decades * u);
    double th = uniform(0.0, 2.0 * kPi);
    return cpx(r * std::cos(th), r * std::sin(th));
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline double sqr(double x) { return x * x; }
inline double abs2(cpx z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace complab
