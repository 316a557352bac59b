#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ctrw/analytics.hpp"
#include "ctrw/errors.hpp"
#include "ctrw/experiments.hpp"
#include "ctrw/process.hpp"
#include "support.hpp"

using Catch::Approx;
using namespace ctrw;

namespace {

SignMemorySpec fig1_b() { return presets::fig1().memory(); }

// Unbiased spec around given q1, q2: eta2 and q0 chosen by the solvers.
MixedSpec unbiased_around(double q1, double q2, double gamma1, double eta1, double gamma2,
                          double gamma0, double eta0) {
  const double eta2 = solve_unbiased_eta2(q1, gamma1, eta1, q2, gamma2);
  return MixedSpec(20.0, 0.5, JumpLaw(solve_unbiased_q0(gamma0, eta0), gamma0, eta0),
                   JumpLaw(q1, gamma1, eta1), JumpLaw(q2, gamma2, eta2));
}

double fd_in_r(const MixedSpec& m, double t) {
  const double h = 1e-6;
  const double r = m.r();
  const double lo = std::max(0.0, r - h), hi = std::min(1.0, r + h);
  return (drift_ab(m.with_r(hi), t) - drift_ab(m.with_r(lo), t)) / (hi - lo);
}

}  // namespace

TEST_CASE("spec validation", "[model]") {
  const JumpLaw law(0.5, 1, 1);
  CHECK_THROWS_AS(MemorylessSpec(0.0, law), ValidationError);
  CHECK_THROWS_AS(SignMemorySpec(-1.0, law, law), ValidationError);
  CHECK_THROWS_AS(MixedSpec(20.0, 1.5, law, law, law), ValidationError);
  CHECK_THROWS_AS(MixedSpec(20.0, -0.1, law, law, law), ValidationError);
  CHECK_THROWS_AS(MixedSpec(std::nan(""), 0.5, law, law, law), ValidationError);
  CHECK_THROWS_AS(presets::fig2(0.6), ValidationError);
  CHECK_THROWS_AS(presets::fig2(-0.01), ValidationError);
}

TEST_CASE("drift of process A", "[model]") {
  const MixedSpec f1 = presets::fig1();
  CHECK(drift_a(f1.memoryless(), 1.0) == 0.0);
  CHECK(drift_a(presets::fig2(0.02).memoryless(), 1.0) == Approx(-0.8).epsilon(1e-13));
  CHECK(drift_a(MemorylessSpec(7.0, JumpLaw(0.3, 2, 5)), 0.0) == 0.0);
  CHECK(drift_a(MemorylessSpec(7.0, JumpLaw(0.3, 2, 5)), 2.0) == Approx(7.0 * 2.0 * (0.15 - 0.14)));
  CHECK_THROWS_AS(drift_a(f1.memoryless(), -1.0), ValidationError);
}

TEST_CASE("beta and drift of process B", "[model]") {
  CHECK(beta(fig1_b()) == Approx(0.8).epsilon(1e-15));
  for (double q : {0.0, 0.1, 0.5, 0.99, 1.0}) {
    CHECK(beta(SignMemorySpec(1.0, JumpLaw(q, 1, 1), JumpLaw(q, 2, 3))) == Approx(q).margin(1e-15));
  }
  CHECK(beta(SignMemorySpec(1.0, JumpLaw(0.9, 1, 1), JumpLaw(0.3, 1, 1))) == Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(beta(SignMemorySpec(1.0, JumpLaw(1.0, 1, 1), JumpLaw(0.0, 1, 1))),
                  DegenerateParameters);

  CHECK(std::abs(drift_b(fig1_b(), 1.0)) < 1e-14);
  CHECK(drift_b(presets::fig3(0.0).memory(), 1.0) == Approx(-83.0 / 8000.0 * 20.0).epsilon(1e-13));
  CHECK(drift_b(presets::fig2(0.02).memory(), 1.0) == Approx(-0.2075).epsilon(1e-13));
  const double eps = 0.02;
  CHECK(drift_b(presets::fig2(eps).memory(), 1.0) ==
        Approx(-(8 * eps + 15 * eps * eps) / 16 * 20).epsilon(1e-13));
  CHECK_THROWS_AS(drift_b(fig1_b(), -0.5), ValidationError);
}

TEST_CASE("alpha and drift of process AB", "[model]") {
  const MixedSpec f1 = presets::fig1();
  CHECK(alpha(f1) == Approx(0.65).epsilon(1e-15));
  CHECK(drift_ab(f1, 1.0) == Approx(9.0 / 8.0).epsilon(1e-14));
  CHECK(drift_ab(f1, 3.0) == Approx(27.0 / 8.0).epsilon(1e-14));
  CHECK(drift_ab(f1, 0.0) == 0.0);

  // Exact rational value for the perturbed family at eps = 0.02 is 949/1600.
  CHECK(drift_ab(presets::fig2(0.02), 1.0) == Approx(949.0 / 1600.0).epsilon(1e-13));
  // Exact polynomial in eps for that family: (36 - 845 eps - 300 eps^2)/640 * lambda t.
  for (double e : {0.0, 0.01, 0.02, 0.035, 0.05, 0.1}) {
    CHECK(drift_ab(presets::fig2(e), 1.0) ==
          Approx((36 - 845 * e - 300 * e * e) / 640 * 20).margin(1e-13));
  }
  CHECK(drift_ab(presets::fig2(0.0), 1.0) == Approx(drift_ab(f1, 1.0)).epsilon(1e-15));

  for (double r : {0.0, 0.02, 0.05, 0.2, 0.5, 0.9, 1.0}) {
    CHECK(drift_ab(presets::fig3(r), 1.0) ==
          Approx((1 - r) * (1638 * r - 83) / 8000 * 20).margin(1e-13));
  }
  CHECK(drift_ab(presets::fig3(0.2), 1.0) == Approx(0.4892).epsilon(1e-13));

  std::mt19937_64 gen(11);
  for (int i = 0; i < 500; ++i) {
    const MixedSpec m = testing::random_spec(gen);
    CHECK(alpha(m.with_r(0.0)) == beta(m.memory()));
    CHECK(alpha(m.with_r(1.0)) == m.a_law().q());
    CHECK(drift_ab(m.with_r(1.0), 1.0) == Approx(drift_a(m.memoryless(), 1.0)).margin(1e-12));
    CHECK(drift_ab(m.with_r(0.0), 1.0) == Approx(drift_b(m.memory(), 1.0)).margin(1e-12));
    CHECK(drift_ab(m, 1.0) == Approx(testing::chain_drift_rate(m)).margin(1e-11));
    CHECK(alpha(m) >= 0.0);
    CHECK(alpha(m) <= 1.0);
  }
}

TEST_CASE("non-superposition", "[model]") {
  const MixedSpec f1 = presets::fig1();
  const double superposition =
      f1.r() * drift_a(f1.memoryless(), 1.0) + (1 - f1.r()) * drift_b(f1.memory(), 1.0);
  CHECK(std::abs(superposition) < 1e-14);
  CHECK(drift_ab(f1, 1.0) == Approx(1.125).epsilon(1e-14));

  // q0 = beta removes the effect: alpha = beta and both sides vanish.
  std::mt19937_64 gen(3);
  for (int i = 0; i < 50; ++i) {
    const MixedSpec u = testing::random_unbiased_spec(gen);
    const double b = beta(u.memory());
    const JumpLaw a(b, u.a_law().gamma(), u.a_law().gamma() * (1 - b) / b);  // mean 0, q0 = beta
    const MixedSpec m(u.lambda(), u.r(), a, u.law_pos(), u.law_neg());
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
      const MixedSpec mr = m.with_r(r);
      CHECK(alpha(mr) == Approx(b).margin(1e-14));
      CHECK(std::abs(drift_ab(mr, 1.0)) < 1e-10);
      CHECK(std::abs(drift_derivative(mr, 1.0)) < 1e-10);
    }
  }
}

TEST_CASE("unbiasing solvers", "[model]") {
  CHECK(solve_unbiased_q0(1, 1) == 0.5);
  CHECK(solve_unbiased_q0(3, 1) == 0.75);
  CHECK(solve_unbiased_q0(1, 3) == 0.25);
  CHECK(JumpLaw(0.75, 3, 1).mean() == 0.0);
  CHECK_THROWS_AS(solve_unbiased_q0(0, 1), ValidationError);

  CHECK(solve_unbiased_q2(0.8, 16, 1, 1, 1) == Approx(0.8).epsilon(1e-14));
  CHECK(solve_unbiased_q2(0.5, 1, 1, 1, 1) == Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(solve_unbiased_q2(1.0, 1, 1, 1, 1), DegenerateParameters);
  CHECK_THROWS_AS(solve_unbiased_q2(1.2, 1, 1, 1, 1), ValidationError);

  SECTION("bound when gamma2 > eta1") {
    // gamma2 = 2, eta1 = 1, gamma1 = 1: q1 must exceed (1 - 1/2) / (1 - 1/2 + 1) = 1/3.
    CHECK(unbiased_q2_min_q1(1, 1, 2) == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(unbiased_q2_min_q1(1, 2, 1) == 0.0);
    for (double eta2 : {0.5, 1.0, 4.0}) {
      const double q2 = solve_unbiased_q2(0.4, 1, 1, 2, eta2);
      CHECK(q2 > 0.0);
      CHECK(q2 < 1.0);
      CHECK(std::abs(drift_b(SignMemorySpec(20, JumpLaw(0.4, 1, 1), JumpLaw(q2, 2, eta2)), 1.0)) <
            1e-12 * 20);
    }
    CHECK_THROWS_AS(solve_unbiased_q2(0.3, 1, 1, 2, 1), ConstraintViolation);
    CHECK_THROWS_AS(solve_unbiased_q2(1.0 / 3.0, 1, 1, 2, 1), ConstraintViolation);

    // Brute force: below the bound drift_b has no zero for q2 in [0, 1].
    for (double q1 : {0.1, 0.2, 0.3, 0.33}) {
      for (double eta2 : {0.25, 1.0, 4.0}) {
        bool sign_change = false;
        double prev = drift_b(SignMemorySpec(1, JumpLaw(q1, 1, 1), JumpLaw(0.0, 2, eta2)), 1.0);
        for (int i = 1; i <= 10000; ++i) {
          const double q2 = i / 10000.0;
          const double v = drift_b(SignMemorySpec(1, JumpLaw(q1, 1, 1), JumpLaw(q2, 2, eta2)), 1.0);
          sign_change |= (prev < 0) != (v < 0) || v == 0.0;
          prev = v;
        }
        CHECK_FALSE(sign_change);
      }
    }
    // Above the bound the scan finds the root the formula gives.
    for (double q1 : {0.34, 0.4, 0.6, 0.9}) {
      const double q2 = solve_unbiased_q2(q1, 1, 1, 2, 1);
      const double lo = std::floor(q2 * 10000) / 10000, hi = lo + 1e-4;
      const double v_lo = drift_b(SignMemorySpec(1, JumpLaw(q1, 1, 1), JumpLaw(lo, 2, 1)), 1.0);
      const double v_hi = drift_b(SignMemorySpec(1, JumpLaw(q1, 1, 1), JumpLaw(hi, 2, 1)), 1.0);
      CHECK(v_lo * v_hi <= 0.0);
    }
  }

  SECTION("randomized") {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 300; ++i) {
      const MixedSpec m = testing::random_unbiased_spec(gen);
      CHECK(std::abs(drift_a(m.memoryless(), 1.0)) < 1e-12 * m.lambda());
      CHECK(std::abs(drift_b(m.memory(), 1.0)) < 1e-12 * m.lambda());
    }
  }

  SECTION("eta2 solver") {
    const double eta2 = solve_unbiased_eta2(0.9, 2, 1.5, 0.3, 1.0);
    CHECK(std::abs(drift_b(SignMemorySpec(1, JumpLaw(0.9, 2, 1.5), JumpLaw(0.3, 1, eta2)), 1.0)) < 1e-13);
    // mu1 > 0 and q2 = 1 leave nothing to balance.
    CHECK_THROWS_AS(solve_unbiased_eta2(0.9, 1, 1, 1.0, 1.0), ConstraintViolation);
  }
}

TEST_CASE("optimal mixing probability", "[model]") {
  for (double q : {0.0, 0.2, 0.5, 0.8, 1.0}) CHECK(optimal_r(q, q) == 0.5);
  CHECK(optimal_r(0.9, 0.3) == Approx((std::sqrt(0.4) - 0.4) / 0.6).epsilon(1e-14));
  CHECK(optimal_r(0.9, 0.3) == Approx(0.3874258867227931).epsilon(1e-14));
  CHECK(optimal_r(0.3, 0.9) == Approx((std::sqrt(1.6) - 1.6) / -0.6).epsilon(1e-14));
  CHECK(optimal_r(0.3, 0.9) == Approx(0.5584815598877471).epsilon(1e-14));
  CHECK(optimal_r(0.5 + 1e-9, 0.5) == Approx(0.5).margin(1e-9));
  CHECK(optimal_r(1.0, 0.0) == 0.0);
  CHECK(optimal_r(0.0, 1.0) == Approx(std::sqrt(2.0) / (1 + std::sqrt(2.0))).epsilon(1e-15));
  CHECK_THROWS_AS(optimal_r(1.2, 0.5), ValidationError);

  SECTION("grid search agrees") {
    // The extremum is a maximum when q0 mu1 + (1 - q0) mu2 > 0.
    for (auto [q1, q2] : {std::pair{0.9, 0.3}, std::pair{0.3, 0.9}}) {
      for (double g0 : {0.5, 1.0, 3.0}) {
        MixedSpec m = unbiased_around(q1, q2, 2.0, 1.5, 1.0, g0, 1.0);
        const double c = m.a_law().q() * m.law_pos().mean() + (1 - m.a_law().q()) * m.law_neg().mean();
        if (c <= 0.0) continue;
        CHECK(std::abs(testing::grid_argmax_r(m, 1e-3) - optimal_r(q1, q2)) <= 1e-3);
      }
    }
  }

  SECTION("spurious root lies outside [0, 1]") {
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        const double q1 = i / 100.0, q2 = j / 100.0;
        const CriticalMixing c = critical_mixing(q1, q2);
        // q1 = 1, q2 = 0 is a double root at r = 0.
        if (i == 100 && j == 0) {
          CHECK(c.spurious == 0.0);
          CHECK(c.optimal == 0.0);
          continue;
        }
        CHECK((c.spurious < 0.0 || c.spurious > 1.0));
        CHECK(c.optimal >= 0.0);
        CHECK(c.optimal <= 1.0);
      }
    }
  }
}

TEST_CASE("drift derivative", "[model]") {
  const MixedSpec f1 = presets::fig1();
  CHECK(std::abs(drift_derivative(f1.with_r(0.5), 1.0)) < 1e-14);
  CHECK(drift_derivative(f1.with_r(0.0), 1.0) == Approx(fd_in_r(f1.with_r(0.0), 1.0)).epsilon(1e-6));
  CHECK(drift_derivative(f1.with_r(0.0), 1.0) == Approx(20 * 0.225).epsilon(1e-13));
  CHECK_THROWS_AS(drift_derivative(presets::fig2(0.02), 1.0), PreconditionViolation);

  std::mt19937_64 gen(17);
  for (int i = 0; i < 200; ++i) {
    const MixedSpec m = testing::random_unbiased_spec(gen);
    const double r_opt = optimal_r(m.law_pos().q(), m.law_neg().q());
    CHECK(std::abs(drift_derivative(m.with_r(r_opt), 1.0)) < 1e-9);
    if (std::abs(m.r() - r_opt) < 0.05) continue;
    const double t = 1.7;
    CHECK(drift_derivative(m, t) == Approx(fd_in_r(m, t)).epsilon(1e-6));
  }
}

TEST_CASE("reference polynomials of the perturbed family", "[model]") {
  const ReferenceDrifts ref = fig2_reference_drifts(0.02, 20.0, 1.0);
  CHECK(ref.mu_a == Approx(-0.8).epsilon(1e-14));
  CHECK(ref.mu_b == Approx(-0.2075).epsilon(1e-14));
  CHECK(ref.mu_ab == Approx(0.600125).epsilon(1e-14));
  // The A and B polynomials agree with the closed forms; the AB one does not.
  for (double e : {0.0, 0.01, 0.03, 0.05}) {
    const MixedSpec m = presets::fig2(e);
    const ReferenceDrifts r = fig2_reference_drifts(e, 20.0, 1.0);
    CHECK(drift_a(m.memoryless(), 1.0) == Approx(r.mu_a).margin(1e-13));
    CHECK(drift_b(m.memory(), 1.0) == Approx(r.mu_b).margin(1e-13));
  }
  CHECK(drift_ab(presets::fig2(0.02), 1.0) - ref.mu_ab == Approx(-0.007).epsilon(1e-10));
  CHECK(fig2_reference_epsilon_star() == Approx(0.04248071107262875).epsilon(1e-12));
  CHECK(fig2_epsilon_star() == Approx(0.04197793593881083).epsilon(1e-10));
  CHECK(std::abs(drift_ab(presets::fig2(fig2_epsilon_star()), 1.0)) < 1e-12);
  CHECK(fig3_r_star() == Approx(83.0 / 1638.0).epsilon(1e-12));
}
