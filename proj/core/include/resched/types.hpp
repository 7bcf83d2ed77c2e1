#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

namespace resched {

using JobId = int;

inline constexpr int kJobCount = 15;
inline constexpr int kAntibodyLength = 5;
inline constexpr int kComponentSize = 3;
inline constexpr int kLibraryCount = kJobCount / kComponentSize;
inline constexpr int kUniverseSize = 10;
inline constexpr int kScorePerMatch = 5;
inline constexpr int kOffsetCount = kJobCount - kAntibodyLength + 1;

// Every stochastic operation takes its generator explicitly.
using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint32_t> stream = {});

// Stable 64-bit seed for a sub-stream of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint32_t> stream);

inline bool valid_job(JobId id) { return id >= 1 && id <= kJobCount; }

// True when `jobs` are pairwise distinct ids from 1..15.
bool distinct_jobs(std::span<const JobId> jobs);

// Where a pooled antibody came from: the two source components (by library
// and component index) and which 5 of the 6 concatenated jobs were kept.
struct Provenance {
  int first_library = 0;
  int second_library = 0;
  int first_component = 0;
  int second_component = 0;
  unsigned mask = 0;  // bit k set => position k of the 6-job string kept

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// A partial schedule of five distinct jobs.
struct Antibody {
  std::array<JobId, kAntibodyLength> jobs{};
  std::optional<Provenance> provenance;

  bool contains(JobId id) const;
  bool valid() const { return distinct_jobs(jobs); }

  friend bool operator==(const Antibody&, const Antibody&) = default;
};

std::string to_string(const Antibody& ab);

}  // namespace resched
