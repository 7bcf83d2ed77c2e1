#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "resched/evolution.hpp"
#include "resched/gene_library.hpp"
#include "resched/hybrid_search.hpp"
#include "resched/matching.hpp"
#include "resched/schedule_model.hpp"

namespace resched {

enum class Phase2 { None, SA, GD };

std::string_view to_string(Phase2 phase2);
Phase2 parse_phase2(std::string_view text);

struct ExperimentConfig {
  // Universe source, first match wins: in-memory, file, generated from the
  // base problem (file or the built-in synthetic one).
  std::optional<AntigenUniverse> universe;
  std::optional<std::filesystem::path> universe_path;
  std::optional<std::filesystem::path> base_problem_path;

  PopulationType population_type = PopulationType::A;
  std::vector<int> ag_sample_sizes{1, 4, 8};
  std::vector<int> thresholds{2, 3, 4, 5};
  int replicates = 10;
  Phase2 phase2 = Phase2::None;
  NeighborOperator op = NeighborOperator::ChangeOneJob;
  GAConfig ga;
  SAConfig sa;
  GDConfig gd;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: one per hardware thread

  // Sorts sample sizes and thresholds and rejects out-of-range values.
  void normalize();
};

// cells[threshold][ag sample size] = mean unmatched-antigen count.
struct CoverageTable {
  std::vector<int> thresholds;
  std::vector<int> ag_sample_sizes;
  std::vector<double> cells;  // row-major by threshold

  CoverageTable() = default;
  CoverageTable(std::vector<int> thresholds, std::vector<int> ag_sample_sizes);

  double at(std::size_t threshold_idx, std::size_t ag_idx) const;
  double& at(std::size_t threshold_idx, std::size_t ag_idx);

  friend bool operator==(const CoverageTable&, const CoverageTable&) = default;
};

struct ReplicateOutcome {
  int replicate = 0;
  int ag_sample_size = 0;
  std::vector<int> sample;
  std::vector<int> unmatched_phase1;  // per threshold
  std::vector<int> unmatched_final;   // per threshold
  long fitness_before = 0;            // Phase I total
  long fitness_after = 0;             // after Phase II (== before without it)
  double phase1_seconds = 0.0;
  double phase2_seconds = 0.0;
};

struct SampleSizeReport {
  int ag_sample_size = 0;
  std::vector<long> before;
  std::vector<long> after;
  double improvement_pct = 0.0;
  double phase1_seconds = 0.0;
  double phase2_seconds = 0.0;
};

struct RunReport {
  std::size_t pool_size = 0;
  double universe_seconds = 0.0;
  double pool_seconds = 0.0;
  std::vector<SampleSizeReport> by_sample_size;
  std::vector<ReplicateOutcome> replicates;  // ordered by (replicate, sample size)
};

struct ExperimentResult {
  AntigenUniverse universe;
  CoverageTable phase1;    // after evolution
  CoverageTable coverage;  // final populations (== phase1 without Phase II)
  RunReport report;
};

// Universe antigens that no antibody matches at `threshold`.
int coverage(std::span<const Antibody> antibodies, const AntigenUniverse& universe, int threshold);

// 100 * (sum(after) - sum(before)) / sum(before).
double fitness_improvement(std::span<const long> before, std::span<const long> after);

AntigenUniverse resolve_universe(const ExperimentConfig& cfg);

ExperimentResult run_experiment(ExperimentConfig cfg);

// Writes coverage.csv, fitness.csv, timings.csv, run.json and run.cfg into
// `dir` (plus coverage_phase1.csv when Phase II ran). Only timings.csv and
// run.json carry wall-clock values.
void emit_reports(const ExperimentResult& result, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir);

CoverageTable read_coverage_csv(const std::filesystem::path& path);

}  // namespace resched
