#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "resched/matching.hpp"
#include "resched/schedule_model.hpp"
#include "resched/types.hpp"

namespace resched {

// Antibodies with fitness cached against one fixed antigen sample.
class Population {
 public:
  Population() = default;

  static Population evaluate(std::vector<Antibody> antibodies, const AntigenUniverse& universe,
                             const AntigenSample& sample);

  // Caller guarantees fitnesses[i] is the fitness of antibodies[i].
  Population(std::vector<Antibody> antibodies, std::vector<int> fitnesses);

  std::span<const Antibody> antibodies() const { return antibodies_; }
  std::span<const int> fitnesses() const { return fitnesses_; }
  const Antibody& antibody(std::size_t i) const { return antibodies_[i]; }
  int fitness(std::size_t i) const { return fitnesses_[i]; }
  std::size_t size() const { return antibodies_.size(); }
  bool empty() const { return antibodies_.empty(); }

  const Antibody& best_ever() const { return best_ever_; }
  int best_ever_fitness() const { return best_ever_fitness_; }
  void offer_best(const Antibody& candidate, int fitness);

  int best_fitness() const;
  int worst_fitness() const;
  long total_fitness() const;
  double mean_fitness() const;

  void replace(std::size_t i, Antibody antibody, int fitness);

  friend bool operator==(const Population&, const Population&) = default;

 private:
  std::vector<Antibody> antibodies_;
  std::vector<int> fitnesses_;
  Antibody best_ever_{};
  int best_ever_fitness_ = -1;
};

struct GAConfig {
  int generations = 250;
  double crossover_rate = 0.7;
  double mutation_rate = 0.2;
  int tournament_size = 2;
  int population_size = 100;

  void validate() const;
};

struct GenerationStats {
  int generation = 0;
  int best = 0;
  double mean = 0.0;
  int worst = 0;
};

GenerationStats population_stats(int generation, const Population& pop);

// CSV `generation,best,mean,worst`.
void write_stats_header(std::ostream& out);
void write_stats_row(std::ostream& out, const GenerationStats& stats);

// Highest fitness among `contenders`, lowest index on ties.
std::size_t tournament_winner(std::span<const int> fitnesses,
                              std::span<const std::size_t> contenders);

// k indices drawn uniformly with replacement, then tournament_winner.
std::size_t tournament_select(std::span<const int> fitnesses, int k, Rng& rng);

// Jobs the two parents share are reordered, in place, to follow the other
// parent's order; unshared jobs stay put. child1 keeps p1's job set, child2
// keeps p2's.
std::pair<Antibody, Antibody> order_crossover(const Antibody& p1, const Antibody& p2);

// Per position with probability `rate`, replace the job by one drawn
// uniformly from the jobs not currently in the antibody.
Antibody mutate(const Antibody& antibody, double rate, Rng& rng);

using GenerationObserver = std::function<void(const GenerationStats&)>;

// Generational GA with family elitism (best two of parents and children)
// and one-slot global elitism. The observer sees generation 0 (the input)
// and every generation after it.
Population evolve(Population pop, const AntigenUniverse& universe, const AntigenSample& sample,
                  const GAConfig& cfg, Rng& rng, const GenerationObserver& observer = {});

}  // namespace resched
