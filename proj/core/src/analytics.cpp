#include "ctrw/analytics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ctrw/errors.hpp"

namespace ctrw {
namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << "time must be finite and non-negative, got " << t;
    throw ValidationError(msg.str());
  }
}

void require_positive_rate(double rate, const char* name) {
  if (!(std::isfinite(rate) && rate > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << rate;
    throw ValidationError(msg.str());
  }
}

// Conditional mean jump of the memory part given the stationary weight w of
// the "after positive" law.
double weighted_memory_mean(const JumpLaw& pos, const JumpLaw& neg, double w) {
  return w * pos.mean() + (1.0 - w) * neg.mean();
}

}  // namespace

double drift_a(const MemorylessSpec& spec, double t) {
  require_time(t);
  return spec.law().mean() * spec.lambda() * t;
}

double beta(const SignMemorySpec& b) {
  const double q1 = b.law_pos().q();
  const double q2 = b.law_neg().q();
  // Same rounding as alpha at r = 0, so the mixture limit is exact.
  const double denom = 1.0 - (q1 - q2);
  if (denom == 0.0) {
    throw DegenerateParameters(
        "beta undefined for q1 = 1, q2 = 0: the sign chain never leaves its initial state");
  }
  return q2 / denom;
}

double drift_b(const SignMemorySpec& b, double t) {
  require_time(t);
  return weighted_memory_mean(b.law_pos(), b.law_neg(), beta(b)) * b.lambda() * t;
}

double alpha(const MixedSpec& m) {
  const double r = m.r();
  const double q0 = m.a_law().q();
  const double q1 = m.law_pos().q();
  const double q2 = m.law_neg().q();
  const double denom = 1.0 - (1.0 - r) * (q1 - q2);
  if (denom == 0.0) {
    throw DegenerateParameters(
        "alpha undefined for r = 0, q1 = 1, q2 = 0: the sign chain never leaves its initial state");
  }
  return (r * q0 + (1.0 - r) * q2) / denom;
}

double drift_ab(const MixedSpec& m, double t) {
  require_time(t);
  const double r = m.r();
  const double a = alpha(m);
  const double memory = weighted_memory_mean(m.law_pos(), m.law_neg(), a);
  return (r * m.a_law().mean() + (1.0 - r) * memory) * m.lambda() * t;
}

double drift(const ProcessSpec& spec, double t) {
  struct Visitor {
    double t;
    double operator()(const MemorylessSpec& s) const { return drift_a(s, t); }
    double operator()(const SignMemorySpec& s) const { return drift_b(s, t); }
    double operator()(const MixedSpec& s) const { return drift_ab(s, t); }
  };
  return std::visit(Visitor{t}, spec);
}

double stationary_positive_probability(const ProcessSpec& spec) {
  struct Visitor {
    double operator()(const MemorylessSpec& s) const { return s.law().q(); }
    double operator()(const SignMemorySpec& s) const { return beta(s); }
    double operator()(const MixedSpec& s) const { return alpha(s); }
  };
  return std::visit(Visitor{}, spec);
}

double solve_unbiased_q0(double gamma0, double eta0) {
  require_positive_rate(gamma0, "gamma0");
  require_positive_rate(eta0, "eta0");
  return gamma0 / (gamma0 + eta0);
}

double unbiased_q2_min_q1(double gamma1, double eta1, double gamma2) {
  require_positive_rate(gamma1, "gamma1");
  require_positive_rate(eta1, "eta1");
  require_positive_rate(gamma2, "gamma2");
  if (gamma2 <= eta1) return 0.0;
  const double gap = 1.0 / eta1 - 1.0 / gamma2;
  return gap / (gap + 1.0 / gamma1);
}

double solve_unbiased_q2(double q1, double gamma1, double eta1, double gamma2, double eta2) {
  require_positive_rate(eta2, "eta2");
  if (!(std::isfinite(q1) && q1 >= 0.0 && q1 <= 1.0)) {
    std::ostringstream msg;
    msg << "q1 must lie in [0, 1], got " << q1;
    throw ValidationError(msg.str());
  }
  if (q1 == 1.0) {
    throw DegenerateParameters("solve_unbiased_q2 requires q1 < 1");
  }
  const double bound = unbiased_q2_min_q1(gamma1, eta1, gamma2);
  if (gamma2 > eta1 && !(q1 > bound)) {
    std::ostringstream msg;
    msg << "no unbiasing q2 exists: gamma2 > eta1 requires q1 > " << bound << ", got " << q1;
    throw ConstraintViolation(msg.str());
  }
  const double bracket = 1.0 / gamma2 - 1.0 / eta1 + (q1 / (1.0 - q1)) / gamma1;
  return 1.0 / (1.0 + eta2 * bracket);
}

double solve_unbiased_eta2(double q1, double gamma1, double eta1, double q2, double gamma2) {
  require_positive_rate(gamma2, "gamma2");
  const JumpLaw pos(q1, gamma1, eta1);
  if (!(std::isfinite(q2) && q2 >= 0.0 && q2 <= 1.0)) {
    std::ostringstream msg;
    msg << "q2 must lie in [0, 1], got " << q2;
    throw ValidationError(msg.str());
  }
  if (q1 == 1.0) throw DegenerateParameters("solve_unbiased_eta2 requires q1 < 1");
  // q2 mu1 + (1 - q1) mu2 = 0 is the unbiasing condition scaled by 1 - q1 + q2.
  const double downward = q2 / gamma2 + q2 * pos.mean() / (1.0 - q1);
  if (!(q2 < 1.0 && downward > 0.0)) {
    std::ostringstream msg;
    msg << "no positive eta2 unbiases B for q1=" << q1 << ", q2=" << q2;
    throw ConstraintViolation(msg.str());
  }
  return (1.0 - q2) / downward;
}

CriticalMixing critical_mixing(double q1, double q2) {
  if (!(q1 >= 0.0 && q1 <= 1.0 && q2 >= 0.0 && q2 <= 1.0)) {
    std::ostringstream msg;
    msg << "q1 and q2 must lie in [0, 1], got q1=" << q1 << ", q2=" << q2;
    throw ValidationError(msg.str());
  }
  const double d = q1 - q2;
  const double root = std::sqrt(1.0 - d);
  CriticalMixing out;
  out.optimal = root / (1.0 + root);
  out.spurious = d == 0.0 ? -std::numeric_limits<double>::infinity()
                          : -(root + (1.0 - d)) / d;
  return out;
}

double optimal_r(double q1, double q2) { return critical_mixing(q1, q2).optimal; }

double drift_derivative(const MixedSpec& m, double t) {
  require_time(t);
  constexpr double kBiasTolerance = 1e-9;
  const double bias_a = drift_a(m.memoryless(), 1.0);
  const double bias_b = drift_b(m.memory(), 1.0);
  if (std::abs(bias_a) > kBiasTolerance || std::abs(bias_b) > kBiasTolerance) {
    std::ostringstream msg;
    msg << "drift_derivative requires unbiased A and B; got mu_a(1)=" << bias_a
        << ", mu_b(1)=" << bias_b;
    throw PreconditionViolation(msg.str());
  }
  const double r = m.r();
  const double q0 = m.a_law().q();
  const double q1 = m.law_pos().q();
  const double q2 = m.law_neg().q();
  const double d = q1 - q2;
  const double root = std::sqrt(1.0 - d);
  const double r_minus = root / (1.0 + root);
  const double weight = q0 * m.law_pos().mean() + (1.0 - q0) * m.law_neg().mean();
  const double denom = 1.0 - (1.0 - r) * d;
  // d * (r - spurious root), finite as d -> 0.
  const double far_factor = d * r + root + (1.0 - d);
  return -weight * far_factor * (r - r_minus) / (denom * denom) * m.lambda() * t;
}

}  // namespace ctrw
