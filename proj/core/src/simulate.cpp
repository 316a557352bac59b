#include "ctrw/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "ctrw/analytics.hpp"
#include "ctrw/errors.hpp"

namespace ctrw {
namespace {

constexpr std::size_t kBlockPaths = 512;
constexpr std::uint64_t kMinSignEvents = 100;

Sign initial_sign(double p_positive, InitialSignMode mode, PhiloxStream& stream) {
  switch (mode) {
    case InitialSignMode::FixedPositive: return Sign::Positive;
    case InitialSignMode::FixedNegative: return Sign::Negative;
    case InitialSignMode::Stationary: break;
  }
  return sample_bernoulli(stream, p_positive) ? Sign::Positive : Sign::Negative;
}

// Generates the events of one path on (0, horizon] and hands each one to
// on_event(time, jump). The draw order per event is: waiting time, then
// (for AB) the mixing coin, then the jump.
template <class OnEvent>
void run_path(const ProcessSpec& spec, double horizon, InitialSignMode mode,
              PhiloxStream& stream, OnEvent&& on_event) {
  struct Visitor {
    double horizon;
    InitialSignMode mode;
    PhiloxStream& stream;
    OnEvent& on_event;

    void operator()(const MemorylessSpec& a) const {
      const double lambda = a.lambda();
      double t = sample_exponential(stream, lambda);
      while (t <= horizon) {
        on_event(t, a.law().sample(stream));
        t += sample_exponential(stream, lambda);
      }
    }

    void operator()(const SignMemorySpec& b) const {
      const double p0 = mode == InitialSignMode::Stationary ? beta(b) : 0.0;
      Sign sign = initial_sign(p0, mode, stream);
      const double lambda = b.lambda();
      double t = sample_exponential(stream, lambda);
      while (t <= horizon) {
        const double jump = b.law_after(sign).sample(stream);
        on_event(t, jump);
        sign = sign_of(jump);
        t += sample_exponential(stream, lambda);
      }
    }

    void operator()(const MixedSpec& m) const {
      const double p0 = mode == InitialSignMode::Stationary ? alpha(m) : 0.0;
      Sign sign = initial_sign(p0, mode, stream);
      const double lambda = m.lambda();
      const double r = m.r();
      double t = sample_exponential(stream, lambda);
      while (t <= horizon) {
        const JumpLaw& law = sample_bernoulli(stream, r)
                                 ? m.a_law()
                                 : (sign == Sign::Positive ? m.law_pos() : m.law_neg());
        const double jump = law.sample(stream);
        on_event(t, jump);
        // A-originated jumps update the memory too.
        sign = sign_of(jump);
        t += sample_exponential(stream, lambda);
      }
    }
  };
  std::visit(Visitor{horizon, mode, stream, on_event}, spec);
}

struct JumpCounts {
  std::uint64_t total = 0;
  std::uint64_t positive = 0;
};

// X(t) at sorted times[0..n) for a single path.
JumpCounts sample_on_grid(const ProcessSpec& spec, std::span<const double> times,
                          InitialSignMode mode, PhiloxStream& stream, std::span<double> out) {
  const double horizon = times.back();
  JumpCounts counts;
  double x = 0.0;
  std::size_t k = 0;
  run_path(spec, horizon, mode, stream, [&](double t, double jump) {
    while (k < times.size() && times[k] < t) out[k++] = x;
    x += jump;
    ++counts.total;
    if (sign_of(jump) == Sign::Positive) ++counts.positive;
  });
  while (k < times.size()) out[k++] = x;
  return counts;
}

// Welford accumulator over a fixed number of coordinates.
struct Moments {
  std::uint64_t n = 0;
  std::vector<double> mean;
  std::vector<double> m2;

  explicit Moments(std::size_t dim = 0) : mean(dim, 0.0), m2(dim, 0.0) {}

  void add(std::span<const double> x) {
    ++n;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double delta = x[i] - mean[i];
      mean[i] += delta * inv_n;
      m2[i] += delta * (x[i] - mean[i]);
    }
  }

  // Chan et al. pairwise merge; applied in block order for determinism.
  void merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double total = na + nb;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double delta = other.mean[i] - mean[i];
      mean[i] += delta * nb / total;
      m2[i] += other.m2[i] + delta * delta * na * nb / total;
    }
    n += other.n;
  }

  double variance(std::size_t i) const {
    return n > 1 ? m2[i] / static_cast<double>(n - 1) : 0.0;
  }
};

unsigned resolve_workers(unsigned requested, std::size_t n_blocks) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n_blocks, 1)));
}

// Runs block_fn(block_index) for every block on a pool of workers and returns
// the per-block results in block order.
template <class Result, class BlockFn>
std::vector<Result> run_blocks(std::size_t n_blocks, unsigned workers, BlockFn block_fn) {
  std::vector<Result> results(n_blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        results[b] = block_fn(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_blocks);
        return;
      }
    }
  };
  const unsigned n_threads = resolve_workers(workers, n_blocks);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

struct EnsembleBlock {
  Moments moments;
  JumpCounts counts;
};

}  // namespace

double Path::value_at(double t) const {
  double x = 0.0;
  for (const Event& e : events) {
    if (e.time > t) break;
    x += e.jump;
  }
  return x;
}

void SimConfig::validate() const {
  std::ostringstream msg;
  if (n_paths < 1) msg << "n_paths must be >= 1; ";
  if (!(std::isfinite(horizon) && horizon > 0.0)) msg << "horizon must be positive; ";
  if (grid_points < 2) msg << "grid_points must be >= 2; ";
  const std::string problems = msg.str();
  if (!problems.empty()) throw ValidationError("invalid simulation config: " + problems);
}

std::vector<double> SimConfig::time_grid() const {
  std::vector<double> grid(grid_points);
  const double step = horizon / static_cast<double>(grid_points - 1);
  for (std::size_t k = 0; k < grid_points; ++k) grid[k] = step * static_cast<double>(k);
  grid.back() = horizon;
  return grid;
}

Path simulate_path(const ProcessSpec& spec, double horizon, InitialSignMode mode,
                   PhiloxStream& stream) {
  if (!(std::isfinite(horizon) && horizon > 0.0)) {
    throw ValidationError("simulate_path: horizon must be positive and finite");
  }
  Path path;
  path.horizon = horizon;
  path.events.reserve(static_cast<std::size_t>(arrival_rate(spec) * horizon * 1.2) + 8);
  run_path(spec, horizon, mode, stream,
           [&](double t, double jump) { path.events.push_back({t, jump}); });
  return path;
}

Path simulate_path(const ProcessSpec& spec, double horizon, InitialSignMode mode,
                   std::uint64_t seed, std::uint64_t path_index) {
  PhiloxStream stream(seed, path_index, stream_tag::kSamplePath);
  return simulate_path(spec, horizon, mode, stream);
}

EnsembleStats simulate_ensemble(const ProcessSpec& spec, const SimConfig& config) {
  config.validate();
  const std::vector<double> grid = config.time_grid();
  const std::size_t n_blocks = (config.n_paths + kBlockPaths - 1) / kBlockPaths;

  auto blocks = run_blocks<EnsembleBlock>(n_blocks, config.workers, [&](std::size_t b) {
    EnsembleBlock block{Moments(grid.size()), {}};
    std::vector<double> values(grid.size());
    const std::size_t first = b * kBlockPaths;
    const std::size_t last = std::min(config.n_paths, first + kBlockPaths);
    for (std::size_t i = first; i < last; ++i) {
      PhiloxStream stream(config.master_seed, i, stream_tag::kEnsemble);
      const JumpCounts c = sample_on_grid(spec, grid, config.initial_sign_mode, stream, values);
      block.counts.total += c.total;
      block.counts.positive += c.positive;
      block.moments.add(values);
    }
    return block;
  });

  Moments total(grid.size());
  JumpCounts counts;
  for (const EnsembleBlock& block : blocks) {
    total.merge(block.moments);
    counts.total += block.counts.total;
    counts.positive += block.counts.positive;
  }

  EnsembleStats stats;
  stats.t_grid = grid;
  stats.n_paths = config.n_paths;
  stats.seed = config.master_seed;
  stats.mean = total.mean;
  stats.variance.resize(grid.size());
  stats.std_error.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    stats.variance[k] = total.variance(k);
    stats.std_error[k] = std::sqrt(stats.variance[k] / static_cast<double>(config.n_paths));
  }
  stats.total_jumps = counts.total;
  stats.positive_jumps = counts.positive;
  stats.positive_jump_fraction =
      counts.total > 0 ? static_cast<double>(counts.positive) / static_cast<double>(counts.total)
                       : 0.0;
  return stats;
}

SignFraction sign_fraction_from(const EnsembleStats& stats) {
  if (stats.total_jumps < kMinSignEvents) {
    std::ostringstream msg;
    msg << "sign fraction needs at least " << kMinSignEvents << " jumps, ensemble produced "
        << stats.total_jumps;
    throw InsufficientEvents(msg.str());
  }
  const double n = static_cast<double>(stats.total_jumps);
  const double p = static_cast<double>(stats.positive_jumps) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), stats.total_jumps};
}

SignFraction empirical_sign_fraction(const ProcessSpec& spec, const SimConfig& config) {
  SimConfig minimal = config;
  minimal.grid_points = 2;
  return sign_fraction_from(simulate_ensemble(spec, minimal));
}

std::vector<CfEstimate> empirical_cf(const ProcessSpec& spec, const SimConfig& config,
                                     std::span<const double> omegas,
                                     std::span<const double> times) {
  if (config.n_paths < 2) throw ValidationError("empirical_cf needs at least two paths");
  if (omegas.empty() || times.empty()) throw ValidationError("empirical_cf: empty grid");
  for (double t : times) {
    if (!(std::isfinite(t) && t > 0.0)) throw ValidationError("empirical_cf: times must be > 0");
  }
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
  std::vector<double> sorted_times(times.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted_times[k] = times[order[k]];

  const std::size_t n_pairs = omegas.size() * times.size();
  const std::size_t n_blocks = (config.n_paths + kBlockPaths - 1) / kBlockPaths;

  // Coordinates: [re(0), im(0), re(1), im(1), ...] in (omega, original time) order.
  auto blocks = run_blocks<Moments>(n_blocks, config.workers, [&](std::size_t b) {
    Moments m(2 * n_pairs);
    std::vector<double> values(sorted_times.size());
    std::vector<double> row(2 * n_pairs);
    const std::size_t first = b * kBlockPaths;
    const std::size_t last = std::min(config.n_paths, first + kBlockPaths);
    for (std::size_t i = first; i < last; ++i) {
      PhiloxStream stream(config.master_seed, i, stream_tag::kCharacteristicFunction);
      sample_on_grid(spec, sorted_times, config.initial_sign_mode, stream, values);
      for (std::size_t w = 0; w < omegas.size(); ++w) {
        for (std::size_t k = 0; k < order.size(); ++k) {
          const double phase = omegas[w] * values[k];
          const std::size_t idx = w * times.size() + order[k];
          row[2 * idx] = std::cos(phase);
          row[2 * idx + 1] = std::sin(phase);
        }
      }
      m.add(row);
    }
    return m;
  });

  Moments total(2 * n_pairs);
  for (const Moments& block : blocks) total.merge(block);

  const double n = static_cast<double>(config.n_paths);
  std::vector<CfEstimate> out;
  out.reserve(n_pairs);
  for (std::size_t w = 0; w < omegas.size(); ++w) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const std::size_t idx = w * times.size() + k;
      out.push_back({omegas[w], times[k], {total.mean[2 * idx], total.mean[2 * idx + 1]},
                     std::sqrt(total.variance(2 * idx) / n),
                     std::sqrt(total.variance(2 * idx + 1) / n)});
    }
  }
  return out;
}

}  // namespace ctrw
