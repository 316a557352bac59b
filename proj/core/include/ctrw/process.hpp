#pragma once

#include <string_view>
#include <variant>

#include "ctrw/jump_law.hpp"

namespace ctrw {

/// The one-bit memory carried by processes B and AB: sign of the last jump.
using SignState = Sign;

/// Process A: compound Poisson walk with i.i.d. double-exponential jumps.
class MemorylessSpec {
public:
  MemorylessSpec(double lambda, JumpLaw law);

  double lambda() const noexcept { return lambda_; }
  const JumpLaw& law() const noexcept { return law_; }

  friend bool operator==(const MemorylessSpec&, const MemorylessSpec&) = default;

private:
  double lambda_;
  JumpLaw law_;
};

/// Process B: the jump law depends on the sign of the previous jump,
/// law_pos after a non-negative jump and law_neg after a negative one.
class SignMemorySpec {
public:
  SignMemorySpec(double lambda, JumpLaw law_pos, JumpLaw law_neg);

  double lambda() const noexcept { return lambda_; }
  const JumpLaw& law_pos() const noexcept { return law_pos_; }
  const JumpLaw& law_neg() const noexcept { return law_neg_; }
  const JumpLaw& law_after(Sign previous) const noexcept {
    return previous == Sign::Positive ? law_pos_ : law_neg_;
  }

  friend bool operator==(const SignMemorySpec&, const SignMemorySpec&) = default;

private:
  double lambda_;
  JumpLaw law_pos_;
  JumpLaw law_neg_;
};

/// Process AB: each jump follows A's law with probability r and B's
/// sign-conditional law otherwise. One arrival rate drives every jump.
class MixedSpec {
public:
  MixedSpec(double r, MemorylessSpec a, SignMemorySpec b);
  MixedSpec(double lambda, double r, JumpLaw a_law, JumpLaw law_pos, JumpLaw law_neg);

  double lambda() const noexcept { return lambda_; }
  double r() const noexcept { return r_; }
  const JumpLaw& a_law() const noexcept { return a_law_; }
  const JumpLaw& law_pos() const noexcept { return law_pos_; }
  const JumpLaw& law_neg() const noexcept { return law_neg_; }

  MemorylessSpec memoryless() const { return {lambda_, a_law_}; }
  SignMemorySpec memory() const { return {lambda_, law_pos_, law_neg_}; }
  MixedSpec with_r(double r) const { return {lambda_, r, a_law_, law_pos_, law_neg_}; }

  friend bool operator==(const MixedSpec&, const MixedSpec&) = default;

private:
  double lambda_;
  double r_;
  JumpLaw a_law_;
  JumpLaw law_pos_;
  JumpLaw law_neg_;
};

using ProcessSpec = std::variant<MemorylessSpec, SignMemorySpec, MixedSpec>;

double arrival_rate(const ProcessSpec& spec) noexcept;
std::string_view process_name(const ProcessSpec& spec) noexcept;

/// Parameter sets of the three published experiments. q values are the
/// unperturbed ones; fig2 lowers every q by epsilon.
namespace presets {

MixedSpec fig1();
MixedSpec fig2(double epsilon = 0.02);
/// Fig. 3 family: q0 = 1/2, q1 = q2 = 39/50, with free mixing probability r.
MixedSpec fig3(double r);

}  // namespace presets

}  // namespace ctrw
