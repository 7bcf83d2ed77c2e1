#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "resched/schedule_model.hpp"
#include "resched/types.hpp"

namespace testing_support {

using namespace resched;

inline Antigen random_antigen(Rng& rng) {
  std::array<JobId, kJobCount> seq{};
  std::iota(seq.begin(), seq.end(), 1);
  std::shuffle(seq.begin(), seq.end(), rng);
  return Antigen(seq);
}

inline Antibody random_antibody(Rng& rng) {
  std::array<JobId, kJobCount> seq{};
  std::iota(seq.begin(), seq.end(), 1);
  std::shuffle(seq.begin(), seq.end(), rng);
  Antibody ab;
  std::copy_n(seq.begin(), kAntibodyLength, ab.jobs.begin());
  return ab;
}

inline AntigenUniverse random_universe(Rng& rng) {
  std::vector<Antigen> v;
  for (int i = 0; i < kUniverseSize; ++i) v.push_back(random_antigen(rng));
  return AntigenUniverse(std::move(v));
}

inline Antibody antibody(std::array<JobId, kAntibodyLength> jobs) {
  Antibody ab;
  ab.jobs = jobs;
  return ab;
}

inline Antibody prefix_of(const Antigen& ag) {
  Antibody ab;
  std::copy_n(ag.sequence().begin(), kAntibodyLength, ab.jobs.begin());
  return ab;
}

inline std::vector<int> as_vector(std::span<const JobId> s) { return {s.begin(), s.end()}; }

// Antigen for the hand-worked matching example.
inline Antigen worked_antigen() {
  const std::array<JobId, kJobCount> seq{1, 2, 7, 4, 3, 9, 6, 8, 14, 5, 13, 12, 10, 11, 15};
  return Antigen(seq);
}

}  // namespace testing_support
