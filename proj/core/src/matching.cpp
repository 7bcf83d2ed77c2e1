#include "resched/matching.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace resched {

AntigenSample::AntigenSample(std::vector<int> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw std::invalid_argument("antigen sample must not be empty");
  std::vector<int> sorted = indices_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("antigen sample indices must be distinct");
  if (sorted.front() < 0 || sorted.back() >= kUniverseSize)
    throw std::invalid_argument("antigen sample index out of range 0..9");
}

AntigenSample AntigenSample::draw(int size, Rng& rng) {
  if (size < 1 || size > kUniverseSize)
    throw std::invalid_argument("antigen sample size must be in 1..10, got " + std::to_string(size));
  std::vector<int> all(kUniverseSize);
  for (int i = 0; i < kUniverseSize; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<int> pick(i, kUniverseSize - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(size));
  return AntigenSample(std::move(all));
}

int alignment_count(const Antigen& antigen, const Antibody& antibody, int offset) {
  if (offset < 0 || offset >= kOffsetCount)
    throw std::out_of_range("alignment offset " + std::to_string(offset) + " outside 0..10");
  int count = 0;
  for (int j = 0; j < kAntibodyLength; ++j) {
    count += antibody.jobs[static_cast<std::size_t>(j)] == antigen[static_cast<std::size_t>(offset + j)];
  }
  return count;
}

MatchResult best_match(const Antigen& antigen, const Antibody& antibody) {
  MatchResult best;
  for (int offset = 0; offset < kOffsetCount; ++offset) {
    const int count = alignment_count(antigen, antibody, offset);
    if (count > best.best_count) {
      best.best_count = count;
      best.best_offset = offset;
      if (count == kAntibodyLength) break;
    }
  }
  best.best_score = kScorePerMatch * best.best_count;
  return best;
}

int antibody_fitness(const Antibody& antibody, const AntigenUniverse& universe, const AntigenSample& sample) {
  int total = 0;
  for (int idx : sample.indices()) total += best_match(universe[static_cast<std::size_t>(idx)], antibody).best_score;
  return total;
}

bool is_matched(const Antigen& antigen, const Antibody& antibody, int threshold) {
  return best_match(antigen, antibody).best_count >= threshold;
}

}  // namespace resched
