#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace complab {

/// Raised when the adaptive integrator cannot meet its tolerance. The
/// message names the offending subinterval so callers can diagnose
/// integrand pathologies.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double a, double b)
      : std::runtime_error(what), lo(a), hi(b) {}
  double lo, hi;
};

struct QuadOptions {
  double rel_tol = 1e-9;
  int max_panels = 10000;
};

/// Adaptive Gauss-Kronrod 15(7) on [a, b]. Bisects the worst panel until
/// the summed error estimate meets rel_tol * |integral|.
double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadOptions opt = {});

/// Single non-adaptive 15-point Kronrod panel; returns the estimate and
/// writes |K15 - G7| into *err_out if non-null.
double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double* err_out);

}  // namespace complab
