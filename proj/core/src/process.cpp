#include "ctrw/process.hpp"

#include <cmath>
#include <sstream>

#include "ctrw/errors.hpp"

namespace ctrw {
namespace {

double checked_rate(double lambda) {
  if (!(std::isfinite(lambda) && lambda > 0.0)) {
    std::ostringstream msg;
    msg << "arrival rate lambda must be positive and finite, got " << lambda;
    throw ValidationError(msg.str());
  }
  return lambda;
}

double checked_mixing(double r) {
  if (!(std::isfinite(r) && r >= 0.0 && r <= 1.0)) {
    std::ostringstream msg;
    msg << "mixing probability r must lie in [0, 1], got " << r;
    throw ValidationError(msg.str());
  }
  return r;
}

}  // namespace

MemorylessSpec::MemorylessSpec(double lambda, JumpLaw law)
    : lambda_(checked_rate(lambda)), law_(law) {}

SignMemorySpec::SignMemorySpec(double lambda, JumpLaw law_pos, JumpLaw law_neg)
    : lambda_(checked_rate(lambda)), law_pos_(law_pos), law_neg_(law_neg) {}

MixedSpec::MixedSpec(double r, MemorylessSpec a, SignMemorySpec b)
    : MixedSpec(a.lambda(), r, a.law(), b.law_pos(), b.law_neg()) {
  if (a.lambda() != b.lambda()) {
    throw ValidationError("process AB requires A and B to share one arrival rate");
  }
}

MixedSpec::MixedSpec(double lambda, double r, JumpLaw a_law, JumpLaw law_pos, JumpLaw law_neg)
    : lambda_(checked_rate(lambda)),
      r_(checked_mixing(r)),
      a_law_(a_law),
      law_pos_(law_pos),
      law_neg_(law_neg) {}

double arrival_rate(const ProcessSpec& spec) noexcept {
  return std::visit([](const auto& s) { return s.lambda(); }, spec);
}

std::string_view process_name(const ProcessSpec& spec) noexcept {
  switch (spec.index()) {
    case 0: return "A";
    case 1: return "B";
    default: return "AB";
  }
}

namespace presets {
namespace {

MixedSpec fig_family(double q0, double q12, double r) {
  constexpr double lambda = 20.0;
  return MixedSpec(lambda, r, JumpLaw(q0, 1.0, 1.0), JumpLaw(q12, 16.0, 1.0),
                   JumpLaw(q12, 1.0, 1.0));
}

}  // namespace

MixedSpec fig1() { return fig_family(0.5, 0.8, 0.5); }

MixedSpec fig2(double epsilon) {
  if (!(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 0.5)) {
    std::ostringstream msg;
    msg << "epsilon must lie in [0, 1/2] so that q0 = 1/2 - epsilon stays a probability, got "
        << epsilon;
    throw ValidationError(msg.str());
  }
  return fig_family(0.5 - epsilon, 0.8 - epsilon, 0.5);
}

MixedSpec fig3(double r) { return fig_family(0.5, 0.78, r); }

}  // namespace presets
}  // namespace ctrw
