#pragma once

#include <span>
#include <vector>

#include "resched/schedule_model.hpp"
#include "resched/types.hpp"

namespace resched {

struct MatchResult {
  int best_count = 0;
  int best_score = 0;
  int best_offset = 0;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Distinct antigen indices used as the fitness target for one run.
class AntigenSample {
 public:
  explicit AntigenSample(std::vector<int> indices);

  // Uniform draw of `size` indices without replacement from 0..9.
  static AntigenSample draw(int size, Rng& rng);

  std::span<const int> indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }

 private:
  std::vector<int> indices_;
};

// Positions j in 0..4 with antibody[j] == antigen[offset + j].
// Throws std::out_of_range unless 0 <= offset <= 10.
int alignment_count(const Antigen& antigen, const Antibody& antibody, int offset);

// Best of all 11 alignments; the smallest offset wins ties.
MatchResult best_match(const Antigen& antigen, const Antibody& antibody);

// Sum of best scores over the sampled antigens.
int antibody_fitness(const Antibody& antibody, const AntigenUniverse& universe,
                     const AntigenSample& sample);

bool is_matched(const Antigen& antigen, const Antibody& antibody, int threshold);

// f(EQ): the fitness of an antibody that matches every sampled antigen fully.
constexpr int max_fitness(int sample_size) {
  return kScorePerMatch * kAntibodyLength * sample_size;
}

}  // namespace resched
