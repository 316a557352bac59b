#pragma once

// Closed-form analytics of the three processes: drifts, stationary sign
// probabilities, unbiasing solvers and the optimal mixing probability.
//
// Every drift is linear in time, mu(t) = rate * t, so each drift_* takes the
// horizon t explicitly and rejects t < 0.

#include "ctrw/process.hpp"

namespace ctrw {

/// Process A: mean_jump(law) * lambda * t.
double drift_a(const MemorylessSpec& spec, double t);

/// Stationary probability that a jump of process B is non-negative,
/// q2 / (1 - q1 + q2). Throws DegenerateParameters when q1 = 1 and q2 = 0.
double beta(const SignMemorySpec& b);

/// Process B: [beta mu1 + (1 - beta) mu2] * lambda * t.
double drift_b(const SignMemorySpec& b, double t);

/// Stationary probability that a jump of process AB is non-negative,
/// [r q0 + (1-r) q2] / [1 - (1-r)(q1 - q2)].
double alpha(const MixedSpec& m);

/// Process AB: r mu_a(t) + (1-r) [alpha mu1 + (1-alpha) mu2] lambda t.
/// Differs from r mu_a + (1-r) mu_b whenever alpha != beta.
double drift_ab(const MixedSpec& m, double t);

/// Unconditional drift of any process.
double drift(const ProcessSpec& spec, double t);

/// Stationary positive-jump probability of any process (q0, beta or alpha).
double stationary_positive_probability(const ProcessSpec& spec);

/// q0 = gamma0 / (gamma0 + eta0) makes process A unbiased.
double solve_unbiased_q0(double gamma0, double eta0);

/// q2 that makes process B unbiased for the given q1 and rates:
///   q2 = 1 / (1 + eta2 (1/gamma2 - 1/eta1 + q1 / ((1 - q1) gamma1))).
/// Requires q1 < 1. When gamma2 > eta1 it also requires q1 strictly above
///   (1/eta1 - 1/gamma2) / (1/eta1 - 1/gamma2 + 1/gamma1),
/// otherwise ConstraintViolation is thrown.
double solve_unbiased_q2(double q1, double gamma1, double eta1, double gamma2, double eta2);

/// eta2 that makes process B unbiased when q1, q2 and the other rates are
/// fixed: eta2 = (1 - q2) / (q2/gamma2 + q2 mu1 / (1 - q1)). Throws
/// ConstraintViolation when no positive eta2 exists.
double solve_unbiased_eta2(double q1, double gamma1, double eta1, double q2, double gamma2);

/// Lower bound on q1 needed by solve_unbiased_q2 (0 when gamma2 <= eta1).
double unbiased_q2_min_q1(double gamma1, double eta1, double gamma2);

/// The two critical points of the AB drift as a function of r, for unbiased
/// A and B. `optimal` is r_-; `spurious` is the other root of d mu / d r,
/// which lies outside [0, 1]. With d = q1 - q2:
///   optimal  =  sqrt(1-d) / (1 + sqrt(1-d))        ( = [sqrt(1-d) - (1-d)] / d )
///   spurious = -(sqrt(1-d) + (1-d)) / d            (infinite at d = 0)
struct CriticalMixing {
  double optimal;
  double spurious;
};
CriticalMixing critical_mixing(double q1, double q2);

/// r_-: the mixing probability that extremizes the AB drift when A and B are
/// individually unbiased. Independent of q0 and of all rates; 1/2 when
/// q1 = q2.
double optimal_r(double q1, double q2);

/// d mu_AB / d r at the spec's r, valid when A and B are both unbiased.
/// Throws PreconditionViolation when either component has drift above 1e-9
/// at t = 1.
double drift_derivative(const MixedSpec& m, double t);

/// Closed-form drift rate per unit time, lambda * weighted mean jump.
inline double drift_rate(const ProcessSpec& spec) { return drift(spec, 1.0); }

}  // namespace ctrw
