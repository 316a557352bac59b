#include "ctrw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ctrw/analytics.hpp"
#include "ctrw/errors.hpp"

namespace ctrw {
namespace {

using cd = std::complex<double>;

void require_right_half_plane(cd s) {
  if (!(s.real() > 0.0) || !std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    std::ostringstream msg;
    msg << "Laplace variable must satisfy Re(s) > 0, got " << s;
    throw ValidationError(msg.str());
  }
}

cd guarded_inverse(cd denominator, double omega, cd s) {
  if (std::abs(denominator) < kPoleGuard) {
    std::ostringstream msg;
    msg << "propagator denominator vanishes at omega=" << omega << ", s=" << s;
    throw PoleProximity(msg.str());
  }
  return 1.0 / denominator;
}

cd propagator_a(const MemorylessSpec& a, double omega, cd s) {
  const double lambda = a.lambda();
  return guarded_inverse(s + lambda * (1.0 - a.law().cf(omega)), omega, s);
}

struct Conditional {
  cd given_positive;
  cd given_negative;
};

// Sign-conditional jump transforms, split by the sign of the new jump.
struct Kernel {
  cd pp, mp, pm, mm;
};

Kernel memory_kernel(double r, const JumpLaw& a_law, const JumpLaw& pos, const JumpLaw& neg,
                     double omega) {
  const cd a_up = a_law.cf_up(omega);
  const cd a_down = a_law.cf_down(omega);
  return {r * a_up + (1.0 - r) * pos.cf_up(omega), r * a_down + (1.0 - r) * pos.cf_down(omega),
          r * a_up + (1.0 - r) * neg.cf_up(omega), r * a_down + (1.0 - r) * neg.cf_down(omega)};
}

// Conditional propagators of the sign-memory system for mixing weight r on
// the memoryless law.
Conditional propagator_memory(double lambda, double r, const JumpLaw& a_law,
                              const JumpLaw& pos, const JumpLaw& neg, double omega, cd s) {
  const Kernel k = memory_kernel(r, a_law, pos, neg, omega);
  const cd delta = (s + lambda - lambda * k.pp) * (s + lambda - lambda * k.mm) -
                   lambda * lambda * k.pm * k.mp;
  const cd inv = guarded_inverse(delta, omega, s);

  const cd num_pos = s + lambda * (1.0 + (1.0 - r) * (pos.cf_down(omega) - neg.cf_down(omega)));
  const cd num_neg = s + lambda * (1.0 - (1.0 - r) * (pos.cf_up(omega) - neg.cf_up(omega)));
  return {num_pos * inv, num_neg * inv};
}

// Zeros of Delta(s) in s, the only singularities of the memory propagators.
std::vector<cd> memory_poles(double lambda, double r, const JumpLaw& a_law, const JumpLaw& pos,
                             const JumpLaw& neg, double omega) {
  const Kernel k = memory_kernel(r, a_law, pos, neg, omega);
  const cd a = lambda * (1.0 - k.pp);
  const cd d = lambda * (1.0 - k.mm);
  const cd root = std::sqrt(0.25 * (a - d) * (a - d) + lambda * lambda * k.pm * k.mp);
  return {-0.5 * (a + d) + root, -0.5 * (a + d) - root};
}

std::vector<cd> propagator_poles(const ProcessSpec& spec, double omega) {
  struct Visitor {
    double omega;
    std::vector<cd> operator()(const MemorylessSpec& a) const {
      return {-a.lambda() * (1.0 - a.law().cf(omega))};
    }
    std::vector<cd> operator()(const SignMemorySpec& b) const {
      return memory_poles(b.lambda(), 0.0, b.law_pos(), b.law_pos(), b.law_neg(), omega);
    }
    std::vector<cd> operator()(const MixedSpec& m) const {
      return memory_poles(m.lambda(), m.r(), m.a_law(), m.law_pos(), m.law_neg(), omega);
    }
  };
  return std::visit(Visitor{omega}, spec);
}

cd select(const Conditional& c, Conditioning conditioning, double weight_positive) {
  switch (conditioning) {
    case Conditioning::GivenPositive: return c.given_positive;
    case Conditioning::GivenNegative: return c.given_negative;
    case Conditioning::Unconditional: break;
  }
  return weight_positive * c.given_positive + (1.0 - weight_positive) * c.given_negative;
}

cd propagator_b(const SignMemorySpec& b, double omega, cd s, Conditioning conditioning) {
  const double w = conditioning == Conditioning::Unconditional ? beta(b) : 0.0;
  const Conditional c =
      propagator_memory(b.lambda(), 0.0, b.law_pos(), b.law_pos(), b.law_neg(), omega, s);
  return select(c, conditioning, w);
}

cd propagator_ab(const MixedSpec& m, double omega, cd s, Conditioning conditioning) {
  const double w = conditioning == Conditioning::Unconditional ? alpha(m) : 0.0;
  const Conditional c = propagator_memory(m.lambda(), m.r(), m.a_law(), m.law_pos(),
                                          m.law_neg(), omega, s);
  return select(c, conditioning, w);
}

}  // namespace

cd fl_propagator_a(const MemorylessSpec& spec, double omega, cd s) {
  require_right_half_plane(s);
  return propagator_a(spec, omega, s);
}

cd fl_propagator_b(const SignMemorySpec& b, double omega, cd s, Conditioning conditioning) {
  require_right_half_plane(s);
  return propagator_b(b, omega, s, conditioning);
}

cd fl_propagator_ab(const MixedSpec& m, double omega, cd s, Conditioning conditioning) {
  require_right_half_plane(s);
  return propagator_ab(m, omega, s, conditioning);
}

cd fl_propagator_continued(const ProcessSpec& spec, double omega, cd s,
                           Conditioning conditioning) {
  struct Visitor {
    double omega;
    cd s;
    Conditioning conditioning;
    cd operator()(const MemorylessSpec& a) const { return propagator_a(a, omega, s); }
    cd operator()(const SignMemorySpec& b) const {
      return propagator_b(b, omega, s, conditioning);
    }
    cd operator()(const MixedSpec& m) const { return propagator_ab(m, omega, s, conditioning); }
  };
  return std::visit(Visitor{omega, s, conditioning}, spec);
}

cd fl_propagator(const ProcessSpec& spec, double omega, cd s, Conditioning conditioning) {
  require_right_half_plane(s);
  return fl_propagator_continued(spec, omega, s, conditioning);
}

SpectralPoint evaluate_spectral(const ProcessSpec& spec, double omega, cd s,
                                Conditioning conditioning) {
  return {omega, s, fl_propagator(spec, omega, s, conditioning), conditioning};
}

cd moment_from_cf(const std::function<cd(double)>& f, double step) {
  const double half = 0.5 * step;
  if (!std::isfinite(step) || !(half >= std::numeric_limits<double>::min())) {
    std::ostringstream msg;
    msg << "moment_from_cf: step " << step << " underflows";
    throw ValidationError(msg.str());
  }
  const cd d_full = (f(step) - f(-step)) / (2.0 * step);
  const cd d_half = (f(half) - f(-half)) / (2.0 * half);
  const cd derivative = (4.0 * d_half - d_full) / 3.0;
  return cd(0.0, -1.0) * derivative;
}

cd mean_laplace(const ProcessSpec& spec, cd s) {
  require_right_half_plane(s);
  return drift_rate(spec) / (s * s);
}

cd time_domain_cf(const ProcessSpec& spec, double omega, double t, Conditioning conditioning,
                  const LaplaceInversionOptions& options) {
  // Invert p(omega, s + c) for the rightmost pole c and restore exp(c t)
  // exactly: the inverted function stays O(1) however fast the CF decays, and
  // the contour only has to enclose the spread of the poles around c.
  const std::vector<cd> poles = propagator_poles(spec, omega);
  const cd shift = *std::max_element(poles.begin(), poles.end(),
                                     [](cd x, cd y) { return x.real() < y.real(); });
  LaplaceInversionOptions shifted = options;
  for (cd p : poles) {
    shifted.singularity_height = std::max(shifted.singularity_height, std::abs((p - shift).imag()));
  }
  const cd growth = std::exp(shift * t);
  shifted.absolute_tolerance = options.absolute_tolerance / std::abs(growth);
  const LaplaceFunction transform = [&](cd s) {
    return fl_propagator_continued(spec, omega, s + shift, conditioning);
  };
  return growth * invert_laplace(transform, t, shifted).value;
}

}  // namespace ctrw
