#include "ctrw/jump_law.hpp"

#include <cmath>
#include <sstream>

#include "ctrw/errors.hpp"

namespace ctrw {

JumpLaw::JumpLaw(double q, double gamma, double eta) : q_(q), gamma_(gamma), eta_(eta) {
  const bool q_ok = std::isfinite(q) && q >= 0.0 && q <= 1.0;
  const bool rates_ok = std::isfinite(gamma) && std::isfinite(eta) && gamma > 0.0 && eta > 0.0;
  if (!q_ok || !rates_ok) {
    std::ostringstream msg;
    msg << "invalid jump law (q=" << q << ", gamma=" << gamma << ", eta=" << eta
        << "): need 0 <= q <= 1 and positive finite rates";
    throw ValidationError(msg.str());
  }
}

double JumpLaw::density(double x) const noexcept {
  if (x >= 0.0) return q_ * gamma_ * std::exp(-gamma_ * x);
  return (1.0 - q_) * eta_ * std::exp(eta_ * x);
}

double JumpLaw::mean() const noexcept { return q_ / gamma_ - (1.0 - q_) / eta_; }

std::complex<double> JumpLaw::cf_up(double omega) const noexcept {
  return q_ * gamma_ / std::complex<double>(gamma_, -omega);
}

std::complex<double> JumpLaw::cf_down(double omega) const noexcept {
  return (1.0 - q_) * eta_ / std::complex<double>(eta_, omega);
}

std::complex<double> JumpLaw::cf(double omega) const noexcept {
  // The two halves sum to one only up to rounding at the origin.
  if (omega == 0.0) return {1.0, 0.0};
  return cf_up(omega) + cf_down(omega);
}

}  // namespace ctrw
