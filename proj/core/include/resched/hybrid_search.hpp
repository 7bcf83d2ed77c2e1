#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "resched/evolution.hpp"
#include "resched/matching.hpp"
#include "resched/types.hpp"

namespace resched {

enum class NeighborOperator { ChangeOneJob, SwapTwoJobs };

std::string_view to_string(NeighborOperator op);
NeighborOperator parse_neighbor_operator(std::string_view text);

struct SAConfig {
  double initial_temperature = 5000.0;
  double final_temperature = 0.05;
  double cooling_factor = 0.98;
  NeighborOperator op = NeighborOperator::ChangeOneJob;

  void validate() const;
};

struct GDConfig {
  int iterations = 120;
  // Stop after this many consecutive steps without a new best; nullopt
  // runs all iterations.
  std::optional<int> stagnation_limit = 30;
  NeighborOperator op = NeighborOperator::ChangeOneJob;

  void validate() const;
};

enum class RefineMethod { SA, GD };

std::string_view to_string(RefineMethod method);

struct TraceRow {
  int step = 0;
  double level = 0.0;  // temperature for SA, boundary for GD
  int current_fitness = 0;
  int best_fitness = 0;
  bool accepted = false;
};

using TraceSink = std::function<void(const TraceRow&)>;

// CSV `step,temperature_or_boundary,current_fitness,best_fitness,accepted`.
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const TraceRow& row);

struct RefineResult {
  Antibody antibody;
  int fitness = 0;
  int steps = 0;
  double final_level = 0.0;  // temperature (SA) or boundary (GD) after the last step
};

Antibody neighbor(const Antibody& antibody, NeighborOperator op, Rng& rng);

// Swap positions i and j; exposed for tests.
Antibody swap_jobs(const Antibody& antibody, int i, int j);

// exp(-delta / T) for delta > 0, 1 otherwise.
double sa_acceptance_probability(double delta, double temperature);

// Number of temperature steps taken while T > final_temperature.
int sa_temperature_steps(const SAConfig& cfg);

// beta = (f(Ab) - f(EQ)) / iter; never positive for a maximizing objective.
double gd_decay_rate(int initial_fitness, int target_fitness, int iterations);

RefineResult sa_refine(const Antibody& antibody, const AntigenUniverse& universe,
                       const AntigenSample& sample, const SAConfig& cfg, Rng& rng,
                       const TraceSink& trace = {});

RefineResult gd_refine(const Antibody& antibody, const AntigenUniverse& universe,
                       const AntigenSample& sample, const GDConfig& cfg, Rng& rng,
                       const TraceSink& trace = {});

struct RefineConfig {
  RefineMethod method = RefineMethod::SA;
  SAConfig sa;
  GDConfig gd;
};

// Each antibody is refined with its own generator seeded from
// (seed, antibody index) and replaced only on strict improvement.
// `trace`, when set, receives (antibody index, row).
Population refine_population(
    const Population& pop, const AntigenUniverse& universe, const AntigenSample& sample,
    const RefineConfig& cfg, std::uint64_t seed,
    const std::function<void(std::size_t, const TraceRow&)>& trace = {});

}  // namespace resched
