#include "resched/evolution.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace resched {

namespace {

std::vector<int> evaluate_all(std::span<const Antibody> antibodies, const AntigenUniverse& universe,
                              const AntigenSample& sample) {
  std::vector<int> out;
  out.reserve(antibodies.size());
  for (const auto& ab : antibodies) out.push_back(antibody_fitness(ab, universe, sample));
  return out;
}

// Jobs from 1..15 not present in `ab`, ascending.
std::vector<JobId> absent_jobs(const Antibody& ab) {
  std::vector<JobId> out;
  out.reserve(kJobCount - kAntibodyLength);
  for (JobId id = 1; id <= kJobCount; ++id) {
    if (!ab.contains(id)) out.push_back(id);
  }
  return out;
}

// Rewrites the positions of `base` that hold jobs shared with `other` so the
// shared jobs appear in `other`'s order.
Antibody reorder_shared(const Antibody& base, const Antibody& other) {
  std::array<JobId, kAntibodyLength> order{};
  std::size_t n = 0;
  for (JobId id : other.jobs) {
    if (base.contains(id)) order[n++] = id;
  }
  Antibody child = base;
  std::size_t k = 0;
  for (auto& slot : child.jobs) {
    if (other.contains(slot)) slot = order[k++];
  }
  if (child.jobs != base.jobs) child.provenance.reset();
  return child;
}

}  // namespace

Population::Population(std::vector<Antibody> antibodies, std::vector<int> fitnesses)
    : antibodies_(std::move(antibodies)), fitnesses_(std::move(fitnesses)) {
  if (antibodies_.size() != fitnesses_.size())
    throw std::invalid_argument("population needs one fitness per antibody");
  for (std::size_t i = 0; i < antibodies_.size(); ++i) offer_best(antibodies_[i], fitnesses_[i]);
}

Population Population::evaluate(std::vector<Antibody> antibodies, const AntigenUniverse& universe,
                                const AntigenSample& sample) {
  auto fitnesses = evaluate_all(antibodies, universe, sample);
  return Population(std::move(antibodies), std::move(fitnesses));
}

void Population::offer_best(const Antibody& candidate, int fitness) {
  if (fitness > best_ever_fitness_) {
    best_ever_ = candidate;
    best_ever_fitness_ = fitness;
  }
}

int Population::best_fitness() const {
  return fitnesses_.empty() ? 0 : *std::max_element(fitnesses_.begin(), fitnesses_.end());
}

int Population::worst_fitness() const {
  return fitnesses_.empty() ? 0 : *std::min_element(fitnesses_.begin(), fitnesses_.end());
}

long Population::total_fitness() const { return std::accumulate(fitnesses_.begin(), fitnesses_.end(), 0L); }

double Population::mean_fitness() const {
  return fitnesses_.empty() ? 0.0 : static_cast<double>(total_fitness()) / static_cast<double>(fitnesses_.size());
}

void Population::replace(std::size_t i, Antibody antibody, int fitness) {
  antibodies_.at(i) = std::move(antibody);
  fitnesses_.at(i) = fitness;
  offer_best(antibodies_[i], fitness);
}

void GAConfig::validate() const {
  if (generations < 0) throw std::invalid_argument("generations must be >= 0");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("crossover rate must lie in [0,1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0,1]");
  if (tournament_size < 1) throw std::invalid_argument("tournament size must be >= 1");
  if (population_size < 1) throw std::invalid_argument("population size must be >= 1");
}

GenerationStats population_stats(int generation, const Population& pop) {
  return {generation, pop.best_fitness(), pop.mean_fitness(), pop.worst_fitness()};
}

void write_stats_header(std::ostream& out) { out << "generation,best,mean,worst\n"; }

void write_stats_row(std::ostream& out, const GenerationStats& s) {
  out << s.generation << ',' << s.best << ',' << std::fixed << std::setprecision(2) << s.mean
      << std::defaultfloat << ',' << s.worst << '\n';
}

std::size_t tournament_winner(std::span<const int> fitnesses, std::span<const std::size_t> contenders) {
  if (contenders.empty()) throw std::invalid_argument("tournament needs at least one contender");
  std::size_t best = contenders.front();
  for (std::size_t c : contenders) {
    if (fitnesses[c] > fitnesses[best] || (fitnesses[c] == fitnesses[best] && c < best)) best = c;
  }
  return best;
}

std::size_t tournament_select(std::span<const int> fitnesses, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("tournament size must be >= 1");
  if (fitnesses.empty()) throw std::invalid_argument("tournament over an empty population");
  std::uniform_int_distribution<std::size_t> pick(0, fitnesses.size() - 1);
  std::vector<std::size_t> contenders(static_cast<std::size_t>(k));
  for (auto& c : contenders) c = pick(rng);
  return tournament_winner(fitnesses, contenders);
}

std::pair<Antibody, Antibody> order_crossover(const Antibody& p1, const Antibody& p2) {
  return {reorder_shared(p1, p2), reorder_shared(p2, p1)};
}

Antibody mutate(const Antibody& antibody, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0,1]");
  std::bernoulli_distribution hit(rate);
  Antibody out = antibody;
  bool changed = false;
  for (auto& slot : out.jobs) {
    if (!hit(rng)) continue;
    auto pool = absent_jobs(out);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    slot = pool[pick(rng)];
    changed = true;
  }
  if (changed) out.provenance.reset();
  return out;
}

Population evolve(Population pop, const AntigenUniverse& universe, const AntigenSample& sample, const GAConfig& cfg,
                  Rng& rng, const GenerationObserver& observer) {
  cfg.validate();
  if (observer) observer(population_stats(0, pop));
  if (pop.empty()) return pop;

  const std::size_t size = pop.size();
  std::bernoulli_distribution crossover(cfg.crossover_rate);
  struct Member {
    Antibody antibody;
    int fitness;
  };

  for (int g = 1; g <= cfg.generations; ++g) {
    std::vector<Antibody> next;
    std::vector<int> next_fit;
    next.reserve(size);
    next_fit.reserve(size);

    while (next.size() < size) {
      const auto i1 = tournament_select(pop.fitnesses(), cfg.tournament_size, rng);
      const auto i2 = tournament_select(pop.fitnesses(), cfg.tournament_size, rng);
      const Antibody& p1 = pop.antibody(i1);
      const Antibody& p2 = pop.antibody(i2);

      auto [c1, c2] = crossover(rng) ? order_crossover(p1, p2) : std::pair{p1, p2};
      c1 = mutate(c1, cfg.mutation_rate, rng);
      c2 = mutate(c2, cfg.mutation_rate, rng);

      // parents first so they win fitness ties
      std::array<Member, 4> family{{{p1, pop.fitness(i1)},
                                    {p2, pop.fitness(i2)},
                                    {c1, antibody_fitness(c1, universe, sample)},
                                    {c2, antibody_fitness(c2, universe, sample)}}};
      std::stable_sort(family.begin(), family.end(),
                       [](const Member& a, const Member& b) { return a.fitness > b.fitness; });
      for (std::size_t k = 0; k < 2 && next.size() < size; ++k) {
        next.push_back(family[k].antibody);
        next_fit.push_back(family[k].fitness);
      }
    }

    Population successor(std::move(next), std::move(next_fit));
    if (pop.best_ever_fitness() > successor.best_fitness()) {
      auto fit = successor.fitnesses();
      auto worst = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
      successor.replace(worst, pop.best_ever(), pop.best_ever_fitness());
    }
    successor.offer_best(pop.best_ever(), pop.best_ever_fitness());
    pop = std::move(successor);
    if (observer) observer(population_stats(g, pop));
  }
  return pop;
}

}  // namespace resched
