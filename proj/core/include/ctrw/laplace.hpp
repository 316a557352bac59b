#pragma once

// Numerical inverse Laplace transform by the fixed Talbot method
// (Abate & Valko, Int. J. Numer. Meth. Eng. 60, 2004).
//
// The Bromwich contour is deformed to
//     s(theta) = r theta (cot theta + i),   -pi < theta < pi,   r = 2M / (5t)
// and the integral is approximated by the M-point trapezoidal rule on each
// half. The full contour is summed (not only its upper half), so complex
// valued originals such as a characteristic function t -> E[exp(i w X(t))]
// are recovered correctly.
//
// Error model: for F analytic left of the contour except at singularities
// enclosed by it, the discretization error decays like 10^(-0.6 M) while
// double-precision roundoff grows like eps * exp(2M/5) relative to the size
// of the integrand near s = r. The node count is therefore increased
// adaptively and the difference between consecutive node counts serves as
// the error estimate; the first estimate within tolerance is returned.
//
// The contour must enclose every singularity of F. It reaches height
// |Im s| = r pi / 2 while still in Re(s) >= 0, so singularities with
// Re(s) <= 0 and |Im s| <= h are enclosed once M >= 5 t h / pi. Outside that
// range consecutive node counts can agree on a wrong value, hence
// singularity_height below.

#include <complex>
#include <functional>

namespace ctrw {

using LaplaceFunction = std::function<std::complex<double>(std::complex<double>)>;

struct LaplaceInversionOptions {
  /// Relative tolerance on the returned value.
  double tolerance = 1e-8;
  /// Absolute floor for originals that are (near) zero; 0 means purely relative.
  double absolute_tolerance = 0.0;
  int min_nodes = 12;
  int max_nodes = 48;
  int node_step = 4;
  /// Bound on |Im s| over the singularities of F, all assumed in Re(s) <= 0.
  /// Raises the starting node count until the contour encloses them.
  double singularity_height = 0.0;
};

struct LaplaceInversionResult {
  std::complex<double> value;
  double error_estimate;
  int nodes;
};

/// f(t) from its Laplace transform F. F may be evaluated anywhere on the
/// Talbot contour, including Re(s) < 0. Throws ValidationError for t <= 0 and
/// NonConvergence when no node count reaches the requested tolerance.
LaplaceInversionResult invert_laplace(const LaplaceFunction& transform, double t,
                                      const LaplaceInversionOptions& options = {});

/// Single fixed-Talbot evaluation with M nodes per half-contour.
std::complex<double> talbot_sum(const LaplaceFunction& transform, double t, int nodes);

}  // namespace ctrw
