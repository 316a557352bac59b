#pragma once

// Event-driven Monte Carlo for processes A, B and AB.
//
// Arrivals are Poisson(lambda): waiting times are drawn exactly as
// Exponential(lambda), so there is no time discretization anywhere. Each
// path i draws from its own counter-based stream PhiloxStream(seed, i, tag),
// which makes ensembles reproducible bit-for-bit and independent of the
// number of worker threads.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctrw/process.hpp"
#include "ctrw/random.hpp"

namespace ctrw {

/// How the sign memory is initialised before the first jump.
///  - Stationary: Bernoulli(beta) for B, Bernoulli(alpha) for AB, so the
///    unconditional drift formulas hold exactly from t = 0.
///  - FixedPositive / FixedNegative: the conditional propagators p(.|+-).
enum class InitialSignMode { Stationary, FixedPositive, FixedNegative };

struct Event {
  double time;
  double jump;
};

/// One realisation on (0, horizon]. X(t) is right-continuous: a jump at t_n
/// is already included in X(t_n).
struct Path {
  std::vector<Event> events;
  double horizon = 0.0;

  double value_at(double t) const;
  double final_value() const { return value_at(horizon); }
};

struct SimConfig {
  std::size_t n_paths = 100000;
  double horizon = 1.0;
  std::size_t grid_points = 101;
  std::uint64_t master_seed = 42;
  InitialSignMode initial_sign_mode = InitialSignMode::Stationary;
  /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results do
  /// not depend on this value.
  unsigned workers = 0;

  /// Throws ValidationError unless n_paths >= 1, horizon > 0, grid_points >= 2.
  void validate() const;
  /// grid_points equally spaced times from 0 to horizon inclusive.
  std::vector<double> time_grid() const;
};

struct EnsembleStats {
  std::vector<double> t_grid;
  std::vector<double> mean;
  std::vector<double> variance;   // unbiased sample variance
  std::vector<double> std_error;  // sqrt(variance / n_paths)
  std::size_t n_paths = 0;
  std::uint64_t total_jumps = 0;
  std::uint64_t positive_jumps = 0;
  double positive_jump_fraction = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

struct SignFraction {
  double fraction;
  double std_error;  // binomial: sqrt(p (1 - p) / n)
  std::uint64_t n_jumps;
};

/// Monte Carlo estimate of E[exp(i omega X(t))] with component-wise standard
/// errors of the real and imaginary parts.
struct CfEstimate {
  double omega;
  double t;
  std::complex<double> value;
  double std_error_re;
  double std_error_im;
};

/// Stream tags keep the ensemble drivers on disjoint random streams.
namespace stream_tag {
inline constexpr std::uint64_t kEnsemble = 0;
inline constexpr std::uint64_t kCharacteristicFunction = 1;
inline constexpr std::uint64_t kSamplePath = 2;
}  // namespace stream_tag

Path simulate_path(const ProcessSpec& spec, double horizon, InitialSignMode mode,
                   PhiloxStream& stream);

/// Single path with its own stream derived from (seed, path_index).
Path simulate_path(const ProcessSpec& spec, double horizon, InitialSignMode mode,
                   std::uint64_t seed, std::uint64_t path_index);

EnsembleStats simulate_ensemble(const ProcessSpec& spec, const SimConfig& config);

/// Pooled fraction of non-negative jumps over an ensemble. Throws
/// InsufficientEvents when fewer than 100 jumps occurred.
SignFraction empirical_sign_fraction(const ProcessSpec& spec, const SimConfig& config);
SignFraction sign_fraction_from(const EnsembleStats& stats);

/// Empirical characteristic function on the (omegas x times) grid, row-major
/// in omega. Uses config.n_paths, master_seed, initial_sign_mode and workers;
/// horizon and grid_points are ignored.
std::vector<CfEstimate> empirical_cf(const ProcessSpec& spec, const SimConfig& config,
                                     std::span<const double> omegas,
                                     std::span<const double> times);

}  // namespace ctrw
