#include "ctrw/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ctrw/errors.hpp"

namespace ctrw {

std::complex<double> talbot_sum(const LaplaceFunction& transform, double t, int nodes) {
  using cd = std::complex<double>;
  const double r = 2.0 * nodes / (5.0 * t);
  // theta = 0 contributes exp(r t) F(r) with unit weight.
  cd sum = std::exp(r * t) * transform(cd(r, 0.0));
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * std::numbers::pi / nodes;
    const double cot = 1.0 / std::tan(theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    // Upper and lower half of the contour; s(-theta) = conj(s(theta)).
    const cd s_up(r * theta * cot, r * theta);
    const cd s_down = std::conj(s_up);
    const cd weight_up(1.0, sigma);
    const cd weight_down(1.0, -sigma);
    sum += std::exp(t * s_up) * transform(s_up) * weight_up;
    sum += std::exp(t * s_down) * transform(s_down) * weight_down;
  }
  return sum * (r / (2.0 * nodes));
}

LaplaceInversionResult invert_laplace(const LaplaceFunction& transform, double t,
                                      const LaplaceInversionOptions& options) {
  if (!(std::isfinite(t) && t > 0.0)) {
    std::ostringstream msg;
    msg << "invert_laplace: t must be positive and finite, got " << t;
    throw ValidationError(msg.str());
  }
  if (options.min_nodes < 2 || options.node_step < 1 || options.max_nodes < options.min_nodes) {
    throw ValidationError("invert_laplace: inconsistent node options");
  }
  if (!(options.tolerance >= 0.0 && options.absolute_tolerance >= 0.0) ||
      !(options.tolerance > 0.0 || options.absolute_tolerance > 0.0)) {
    throw ValidationError("invert_laplace: need a positive relative or absolute tolerance");
  }
  if (!(options.singularity_height >= 0.0) || !std::isfinite(options.singularity_height)) {
    throw ValidationError("invert_laplace: singularity_height must be finite and non-negative");
  }

  int first = options.min_nodes;
  const double enclosing = 5.0 * t * options.singularity_height / std::numbers::pi;
  if (enclosing > first) {
    if (enclosing > options.max_nodes) {
      std::ostringstream msg;
      msg << "invert_laplace: enclosing singularities of height " << options.singularity_height
          << " at t=" << t << " needs more than " << options.max_nodes << " nodes";
      throw NonConvergence(msg.str());
    }
    first = static_cast<int>(std::ceil(enclosing));
  }

  std::complex<double> previous = talbot_sum(transform, t, first);
  double best_error = INFINITY;
  for (int m = first + options.node_step; m <= options.max_nodes;
       m += options.node_step) {
    const std::complex<double> current = talbot_sum(transform, t, m);
    const double error = std::abs(current - previous);
    const double allowed =
        std::max(options.tolerance * std::abs(current), options.absolute_tolerance);
    if (std::isfinite(error) && error <= allowed) return {current, error, m};
    if (error < best_error) best_error = error;
    previous = current;
  }
  std::ostringstream msg;
  msg << "invert_laplace did not converge at t=" << t << ": best consecutive difference "
      << best_error << " with up to " << options.max_nodes << " nodes";
  throw NonConvergence(msg.str());
}

}  // namespace ctrw
