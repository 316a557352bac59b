#pragma once

#include <complex>

#include "ctrw/random.hpp"

namespace ctrw {

/// Sign of a jump. A zero-size jump counts as positive.
enum class Sign { Positive, Negative };

inline Sign sign_of(double jump) noexcept {
  return jump >= 0.0 ? Sign::Positive : Sign::Negative;
}

/// Asymmetric double-exponential jump-size law
///
///   h(x) = q * gamma * exp(-gamma x)        for x >= 0
///        = (1 - q) * eta * exp(eta x)       for x <  0
///
/// q is the probability of a non-negative jump; 1/gamma and 1/eta are the
/// mean upward and downward jump magnitudes. Parameters are validated once in
/// the constructor; every member function is then total.
class JumpLaw {
public:
  /// Throws ValidationError unless 0 <= q <= 1 and both rates are finite and
  /// strictly positive.
  JumpLaw(double q, double gamma, double eta);

  double q() const noexcept { return q_; }
  double gamma() const noexcept { return gamma_; }
  double eta() const noexcept { return eta_; }

  double density(double x) const noexcept;

  /// q/gamma - (1-q)/eta
  double mean() const noexcept;

  /// Fourier transform E[exp(i omega J)] = q gamma/(gamma - i omega)
  ///                                      + (1-q) eta/(eta + i omega).
  std::complex<double> cf(double omega) const noexcept;

  /// Upward and downward halves of cf(), weighted by q and 1-q. Used to
  /// assemble the sign-conditional kernels of the memory processes.
  std::complex<double> cf_up(double omega) const noexcept;
  std::complex<double> cf_down(double omega) const noexcept;

  template <class Engine>
  double sample(Engine& engine) const {
    if (sample_bernoulli(engine, q_)) return sample_exponential(engine, gamma_);
    return -sample_exponential(engine, eta_);
  }

  friend bool operator==(const JumpLaw&, const JumpLaw&) = default;

private:
  double q_;
  double gamma_;
  double eta_;
};

// Free-function spellings of the law's operations.
inline double density(const JumpLaw& law, double x) noexcept { return law.density(x); }
inline double mean_jump(const JumpLaw& law) noexcept { return law.mean(); }
inline std::complex<double> cf_jump(const JumpLaw& law, double omega) noexcept {
  return law.cf(omega);
}
template <class Engine>
double sample_jump(const JumpLaw& law, Engine& engine) {
  return law.sample(engine);
}

}  // namespace ctrw
