#pragma once

// Fourier-Laplace propagators p(omega, s) = int_0^inf dt e^{-st} E[e^{i omega X(t)}]
// of processes A, B and AB, their first moments, and numerical inversion in s.
//
// The memory processes are solved as a 2x2 linear system in the conditional
// propagators p(.|+) and p(.|-). With the sign-conditional kernel transforms
//   k_pp = r up_A + (1-r) up_pos      k_mp = r down_A + (1-r) down_pos
//   k_pm = r up_A + (1-r) up_neg      k_mm = r down_A + (1-r) down_neg
// (up/down are the q- and (1-q)-weighted halves of a law's transform) the
// determinant is
//   Delta = (s + lambda - lambda k_pp)(s + lambda - lambda k_mm) - lambda^2 k_pm k_mp
// and
//   p(.|+) = [s + lambda (1 + (1-r)(down_pos - down_neg))] / Delta
//   p(.|-) = [s + lambda (1 - (1-r)(up_pos - up_neg))] / Delta.
// Process B is the r = 0 case.

#include <complex>
#include <functional>

#include "ctrw/laplace.hpp"
#include "ctrw/process.hpp"

namespace ctrw {

enum class Conditioning { GivenPositive, GivenNegative, Unconditional };

struct SpectralPoint {
  double omega;
  std::complex<double> s;
  std::complex<double> value;
  Conditioning conditioning;
};

/// Denominators below this magnitude raise PoleProximity.
inline constexpr double kPoleGuard = 1e-14;

// All fl_propagator_* require Re(s) > 0 (ValidationError otherwise).
std::complex<double> fl_propagator_a(const MemorylessSpec& spec, double omega,
                                     std::complex<double> s);
std::complex<double> fl_propagator_b(const SignMemorySpec& b, double omega,
                                     std::complex<double> s, Conditioning conditioning);
std::complex<double> fl_propagator_ab(const MixedSpec& m, double omega,
                                      std::complex<double> s, Conditioning conditioning);

/// Dispatch over the process kind. Process A has no memory and ignores the
/// conditioning.
std::complex<double> fl_propagator(const ProcessSpec& spec, double omega,
                                   std::complex<double> s,
                                   Conditioning conditioning = Conditioning::Unconditional);

SpectralPoint evaluate_spectral(const ProcessSpec& spec, double omega, std::complex<double> s,
                                Conditioning conditioning = Conditioning::Unconditional);

/// Same as fl_propagator but without the Re(s) > 0 check: the analytic
/// continuation used on Laplace-inversion contours. The pole guard applies.
std::complex<double> fl_propagator_continued(const ProcessSpec& spec, double omega,
                                             std::complex<double> s,
                                             Conditioning conditioning);

/// First moment of a characteristic function at the origin,
///   -i d/d omega f(omega) |_{omega = 0},
/// by central differences with one Richardson step:
///   D(h) = [f(h) - f(-h)] / 2h,   result = -i [4 D(h/2) - D(h)] / 3.
/// Throws ValidationError when the step is not a positive normal number.
std::complex<double> moment_from_cf(const std::function<std::complex<double>(double)>& f,
                                    double step = 1e-5);

/// Closed-form Laplace-domain mean, drift_rate / s^2.
std::complex<double> mean_laplace(const ProcessSpec& spec, std::complex<double> s);

/// E[exp(i omega X(t))] by numerical inversion of the propagator in s.
/// The propagator is inverted around its rightmost pole c (known in closed
/// form) and exp(c t) is applied exactly, so the relative accuracy holds
/// even where the CF is tiny.
std::complex<double> time_domain_cf(const ProcessSpec& spec, double omega, double t,
                                    Conditioning conditioning = Conditioning::Unconditional,
                                    const LaplaceInversionOptions& options = {});

}  // namespace ctrw
