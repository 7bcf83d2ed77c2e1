#include "resched/hybrid_search.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace resched {

namespace {

class Evaluator {
 public:
  Evaluator(const AntigenUniverse& universe, const AntigenSample& sample) : universe_(universe), sample_(sample) {}
  int operator()(const Antibody& ab) const { return antibody_fitness(ab, universe_, sample_); }

 private:
  const AntigenUniverse& universe_;
  const AntigenSample& sample_;
};

Antibody change_one_job(const Antibody& antibody, Rng& rng) {
  std::uniform_int_distribution<int> position(0, kAntibodyLength - 1);
  const auto pos = static_cast<std::size_t>(position(rng));
  std::vector<JobId> absent;
  for (JobId id = 1; id <= kJobCount; ++id) {
    if (!antibody.contains(id)) absent.push_back(id);
  }
  std::uniform_int_distribution<std::size_t> pick(0, absent.size() - 1);
  Antibody out = antibody;
  out.jobs[pos] = absent[pick(rng)];
  out.provenance.reset();
  return out;
}

}  // namespace

std::string_view to_string(NeighborOperator op) {
  return op == NeighborOperator::ChangeOneJob ? "change" : "swap";
}

NeighborOperator parse_neighbor_operator(std::string_view text) {
  if (text == "change") return NeighborOperator::ChangeOneJob;
  if (text == "swap") return NeighborOperator::SwapTwoJobs;
  throw std::invalid_argument("unknown operator '" + std::string(text) + "' (expected change or swap)");
}

std::string_view to_string(RefineMethod method) { return method == RefineMethod::SA ? "sa" : "gd"; }

void SAConfig::validate() const {
  if (!(final_temperature > 0.0 && final_temperature < initial_temperature))
    throw std::invalid_argument("SA needs 0 < final temperature < initial temperature");
  if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) throw std::invalid_argument("SA cooling factor must lie in (0,1)");
}

void GDConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("GD iterations must be >= 1");
  if (stagnation_limit && *stagnation_limit < 1) throw std::invalid_argument("GD stagnation limit must be >= 1");
}

void write_trace_header(std::ostream& out) {
  out << "step,temperature_or_boundary,current_fitness,best_fitness,accepted\n";
}

void write_trace_row(std::ostream& out, const TraceRow& row) {
  out << row.step << ',' << row.level << ',' << row.current_fitness << ',' << row.best_fitness << ','
      << (row.accepted ? 1 : 0) << '\n';
}

Antibody swap_jobs(const Antibody& antibody, int i, int j) {
  if (i < 0 || j < 0 || i >= kAntibodyLength || j >= kAntibodyLength)
    throw std::out_of_range("swap position outside 0..4");
  Antibody out = antibody;
  std::swap(out.jobs[static_cast<std::size_t>(i)], out.jobs[static_cast<std::size_t>(j)]);
  if (i != j) out.provenance.reset();
  return out;
}

Antibody neighbor(const Antibody& antibody, NeighborOperator op, Rng& rng) {
  if (op == NeighborOperator::ChangeOneJob) return change_one_job(antibody, rng);
  std::uniform_int_distribution<int> first(0, kAntibodyLength - 1);
  std::uniform_int_distribution<int> second(0, kAntibodyLength - 2);
  const int i = first(rng);
  int j = second(rng);
  if (j >= i) ++j;
  return swap_jobs(antibody, i, j);
}

double sa_acceptance_probability(double delta, double temperature) {
  return delta <= 0.0 ? 1.0 : std::exp(-delta / temperature);
}

int sa_temperature_steps(const SAConfig& cfg) {
  cfg.validate();
  int steps = 0;
  for (double t = cfg.initial_temperature; t > cfg.final_temperature; t *= cfg.cooling_factor) ++steps;
  return steps;
}

double gd_decay_rate(int initial_fitness, int target_fitness, int iterations) {
  if (iterations < 1) throw std::invalid_argument("GD iterations must be >= 1");
  return static_cast<double>(initial_fitness - target_fitness) / static_cast<double>(iterations);
}

RefineResult sa_refine(const Antibody& antibody, const AntigenUniverse& universe, const AntigenSample& sample,
                       const SAConfig& cfg, Rng& rng, const TraceSink& trace) {
  cfg.validate();
  const Evaluator fitness(universe, sample);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int initial = fitness(antibody);
  Antibody current = antibody;
  int current_fit = initial;
  Antibody best = antibody;
  int best_fit = initial;

  double temperature = cfg.initial_temperature;
  int step = 0;
  while (temperature > cfg.final_temperature) {
    Antibody candidate = neighbor(current, cfg.op, rng);
    const int candidate_fit = fitness(candidate);
    const double delta = current_fit - candidate_fit;
    const bool accepted = delta <= 0.0 || unit(rng) < sa_acceptance_probability(delta, temperature);
    if (accepted) {
      current = std::move(candidate);
      current_fit = candidate_fit;
      if (current_fit > best_fit) {
        best = current;
        best_fit = current_fit;
      }
    }
    if (trace) trace({step, temperature, current_fit, best_fit, accepted});
    temperature *= cfg.cooling_factor;
    ++step;
  }

  if (best_fit > initial) return {best, best_fit, step, temperature};
  return {antibody, initial, step, temperature};
}

RefineResult gd_refine(const Antibody& antibody, const AntigenUniverse& universe, const AntigenSample& sample,
                       const GDConfig& cfg, Rng& rng, const TraceSink& trace) {
  cfg.validate();
  const Evaluator fitness(universe, sample);

  const int initial = fitness(antibody);
  const double beta = gd_decay_rate(initial, max_fitness(sample.size()), cfg.iterations);
  Antibody current = antibody;
  int current_fit = initial;
  Antibody best = antibody;
  int best_fit = initial;

  double boundary = initial;
  int step = 0;
  int stagnant = 0;
  while (step < cfg.iterations) {
    Antibody candidate = neighbor(current, cfg.op, rng);
    const int candidate_fit = fitness(candidate);
    const bool accepted = candidate_fit >= current_fit || candidate_fit >= boundary;
    if (accepted) {
      current = std::move(candidate);
      current_fit = candidate_fit;
    }
    if (current_fit > best_fit) {
      best = current;
      best_fit = current_fit;
      stagnant = 0;
    } else {
      ++stagnant;
    }
    if (trace) trace({step, boundary, current_fit, best_fit, accepted});
    ++step;
    // closed form keeps the level exactly f0 - k*beta
    boundary = initial - step * beta;
    if (cfg.stagnation_limit && stagnant >= *cfg.stagnation_limit) break;
  }

  if (best_fit > initial) return {best, best_fit, step, boundary};
  return {antibody, initial, step, boundary};
}

Population refine_population(const Population& pop, const AntigenUniverse& universe, const AntigenSample& sample,
                             const RefineConfig& cfg, std::uint64_t seed,
                             const std::function<void(std::size_t, const TraceRow&)>& trace) {
  Population out = pop;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Rng rng = make_rng(seed, {static_cast<std::uint32_t>(i)});
    TraceSink sink;
    if (trace) sink = [&trace, i](const TraceRow& row) { trace(i, row); };
    const RefineResult result = cfg.method == RefineMethod::SA
                                    ? sa_refine(pop.antibody(i), universe, sample, cfg.sa, rng, sink)
                                    : gd_refine(pop.antibody(i), universe, sample, cfg.gd, rng, sink);
    if (result.fitness > pop.fitness(i)) out.replace(i, result.antibody, result.fitness);
  }
  return out;
}

}  // namespace resched
