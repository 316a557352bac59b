#pragma once

// Helpers shared by the unit tests and the acceptance suite.

#include <cmath>
#include <cstdint>
#include <random>

#include "ctrw/analytics.hpp"
#include "ctrw/errors.hpp"
#include "ctrw/process.hpp"

namespace ctrw::testing {

/// Uniformly random valid AB spec (A and B generally biased).
inline MixedSpec random_spec(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> prob(0.0, 1.0), rate(0.2, 8.0), lam(0.5, 40.0);
  return MixedSpec(lam(gen), prob(gen), JumpLaw(prob(gen), rate(gen), rate(gen)),
                   JumpLaw(prob(gen), rate(gen), rate(gen)), JumpLaw(prob(gen), rate(gen), rate(gen)));
}

/// Random AB spec whose A and B components are both unbiased: q0 from the
/// rates of A, q2 from the unbiasing formula (rejecting draws where no valid
/// q2 exists).
inline MixedSpec random_unbiased_spec(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> prob(0.05, 0.95), rate(0.2, 8.0), lam(0.5, 40.0);
  for (;;) {
    const double gamma0 = rate(gen), eta0 = rate(gen);
    const double q1 = prob(gen), gamma1 = rate(gen), eta1 = rate(gen);
    const double gamma2 = rate(gen), eta2 = rate(gen);
    double q2;
    try {
      q2 = solve_unbiased_q2(q1, gamma1, eta1, gamma2, eta2);
    } catch (const ConstraintViolation&) {
      continue;
    }
    if (!(q2 > 0.0 && q2 < 1.0)) continue;
    return MixedSpec(lam(gen), prob(gen), JumpLaw(solve_unbiased_q0(gamma0, eta0), gamma0, eta0),
                     JumpLaw(q1, gamma1, eta1), JumpLaw(q2, gamma2, eta2));
  }
}

/// Drift rate of AB from the two-state chain of jump signs:
///   P(+ | +) = r q0 + (1-r) q1,  P(+ | -) = r q0 + (1-r) q2,
///   pi+ = P(+|-) / (1 - P(+|+) + P(+|-)),
///   rate = lambda [pi+ m+ + (1 - pi+) m-]  with m+- the mean next jump given the sign.
inline double chain_drift_rate(const MixedSpec& m) {
  const double r = m.r();
  const double pp = r * m.a_law().q() + (1 - r) * m.law_pos().q();
  const double mp = r * m.a_law().q() + (1 - r) * m.law_neg().q();
  const double pi_pos = mp / (1.0 - pp + mp);
  const double mean_after_pos = r * m.a_law().mean() + (1 - r) * m.law_pos().mean();
  const double mean_after_neg = r * m.a_law().mean() + (1 - r) * m.law_neg().mean();
  return m.lambda() * (pi_pos * mean_after_pos + (1.0 - pi_pos) * mean_after_neg);
}

/// r on a uniform grid of the given step that maximizes the AB drift.
inline double grid_argmax_r(const MixedSpec& m, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  double best_r = 0.0, best = drift_ab(m.with_r(0.0), 1.0);
  for (int i = 1; i <= n; ++i) {
    const double r = static_cast<double>(i) / n;
    const double v = drift_ab(m.with_r(r), 1.0);
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  return best_r;
}

}  // namespace ctrw::testing
