#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "resched/experiment.hpp"

namespace fs = std::filesystem;
using namespace resched;

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::string universe;
  std::string base_problem;
  std::string type = "a";
  std::vector<int> ag_sample{1, 4, 8};
  std::vector<int> thresholds{2, 3, 4, 5};
  int generations = 250;
  double crossover_rate = 0.7;
  double mutation_rate = 0.2;
  int tournament_size = 2;
  int population_size = 100;
  std::string phase2 = "none";
  std::string op = "change";
  int replicates = 10;
  double sa_t0 = 5000.0;
  double sa_tf = 0.05;
  double sa_alpha = 0.98;
  int gd_iterations = 120;
  int gd_stagnation = 30;
  int threads = 0;
  std::string out;
  std::string population;
  std::string stats;
  std::string trace;
};

GAConfig ga_config(const Options& o) {
  GAConfig cfg;
  cfg.generations = o.generations;
  cfg.crossover_rate = o.crossover_rate;
  cfg.mutation_rate = o.mutation_rate;
  cfg.tournament_size = o.tournament_size;
  cfg.population_size = o.population_size;
  cfg.validate();
  return cfg;
}

RefineConfig refine_config(const Options& o) {
  RefineConfig cfg;
  const Phase2 p = parse_phase2(o.phase2);
  if (p == Phase2::None) throw std::invalid_argument("refine needs --phase2 sa or gd");
  cfg.method = p == Phase2::SA ? RefineMethod::SA : RefineMethod::GD;
  const NeighborOperator op = parse_neighbor_operator(o.op);
  cfg.sa = {o.sa_t0, o.sa_tf, o.sa_alpha, op};
  cfg.gd.iterations = o.gd_iterations;
  cfg.gd.op = op;
  if (o.gd_stagnation > 0) {
    cfg.gd.stagnation_limit = o.gd_stagnation;
  } else {
    cfg.gd.stagnation_limit.reset();
  }
  cfg.sa.validate();
  cfg.gd.validate();
  return cfg;
}

AntigenUniverse require_universe(const Options& o) {
  if (o.universe.empty()) throw std::invalid_argument("--universe is required");
  return load_universe(o.universe);
}

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct PopulationFile {
  std::vector<Antibody> antibodies;
  std::optional<AntigenSample> sample;
};

void write_population(std::ostream& out, const AntigenSample& sample, std::span<const Antibody> antibodies) {
  out << "# sample";
  for (int i : sample.indices()) out << ' ' << i;
  out << '\n';
  write_antibodies(out, antibodies);
}

PopulationFile read_population(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  PopulationFile file;
  std::string line;
  std::stringstream body;
  while (std::getline(in, line)) {
    if (line.rfind("# sample", 0) == 0 && !file.sample) {
      std::istringstream ss(line.substr(8));
      std::vector<int> idx;
      int v = 0;
      while (ss >> v) idx.push_back(v);
      file.sample = AntigenSample(idx);
    }
    body << line << '\n';
  }
  try {
    file.antibodies = read_antibodies(body);
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
  if (file.antibodies.empty()) throw std::runtime_error(path + ": no antibodies");
  return file;
}

AntigenSample sample_for(const Options& o, const PopulationFile& file) {
  if (file.sample) return *file.sample;
  if (o.ag_sample.size() != 1) {
    throw std::invalid_argument("population file has no '# sample' line; pass a single --ag-sample");
  }
  Rng rng = make_rng(o.seed);
  return AntigenSample::draw(o.ag_sample.front(), rng);
}

void gen_universe(const Options& o) {
  const BaseProblem base = o.base_problem.empty() ? default_base_problem() : load_base_problem(o.base_problem);
  Rng rng = make_rng(o.seed, {1});
  const AntigenUniverse u = generate_universe(base, rng);
  emit(o.out, [&](std::ostream& out) { write_universe(out, u); });
}

void build_pool(const Options& o) {
  const AntigenUniverse u = require_universe(o);
  const AntibodyPool pool = generate_pool(build_libraries(u), parse_population_type(o.type));
  emit(o.out, [&](std::ostream& out) { write_antibodies(out, pool.antibodies); });
  std::cerr << "type " << to_string(pool.type) << ": " << pool.size() << " antibodies\n";
}

void evolve_cmd(const Options& o) {
  if (o.ag_sample.size() != 1) throw std::invalid_argument("evolve takes a single --ag-sample size");
  const AntigenUniverse u = require_universe(o);
  const GAConfig cfg = ga_config(o);
  const AntibodyPool pool = generate_pool(build_libraries(u), parse_population_type(o.type));
  Rng rng = make_rng(o.seed);
  const AntigenSample sample = AntigenSample::draw(o.ag_sample.front(), rng);
  Population pop = Population::evaluate(sample_initial(pool, static_cast<std::size_t>(cfg.population_size), rng), u, sample);

  std::ofstream stats;
  GenerationObserver observer;
  if (!o.stats.empty()) {
    stats.open(o.stats);
    if (!stats) throw std::runtime_error("cannot write " + o.stats);
    write_stats_header(stats);
    observer = [&](const GenerationStats& s) { write_stats_row(stats, s); };
  }
  pop = evolve(std::move(pop), u, sample, cfg, rng, observer);
  emit(o.out, [&](std::ostream& out) { write_population(out, sample, pop.antibodies()); });
  std::cerr << "best " << pop.best_fitness() << " of " << max_fitness(sample.size()) << ", total "
            << pop.total_fitness() << '\n';
}

void refine_cmd(const Options& o) {
  if (o.population.empty()) throw std::invalid_argument("--population is required");
  const AntigenUniverse u = require_universe(o);
  const RefineConfig cfg = refine_config(o);
  const PopulationFile file = read_population(o.population);
  const AntigenSample sample = sample_for(o, file);
  const Population before = Population::evaluate(file.antibodies, u, sample);

  std::ofstream trace;
  std::function<void(std::size_t, const TraceRow&)> sink;
  if (!o.trace.empty()) {
    trace.open(o.trace);
    if (!trace) throw std::runtime_error("cannot write " + o.trace);
    trace << "antibody,";
    write_trace_header(trace);
    sink = [&](std::size_t i, const TraceRow& row) {
      trace << i << ',';
      write_trace_row(trace, row);
    };
  }
  const Population after = refine_population(before, u, sample, cfg, o.seed, sink);
  emit(o.out, [&](std::ostream& out) { write_population(out, sample, after.antibodies()); });
  std::cerr << "total fitness " << before.total_fitness() << " -> " << after.total_fitness() << '\n';
}

void evaluate_cmd(const Options& o) {
  if (o.population.empty()) throw std::invalid_argument("--population is required");
  const AntigenUniverse u = require_universe(o);
  const PopulationFile file = read_population(o.population);
  const AntigenSample sample = sample_for(o, file);
  const Population pop = Population::evaluate(file.antibodies, u, sample);
  emit(o.out, [&](std::ostream& out) {
    out << "threshold,unmatched\n";
    for (int t : o.thresholds) out << t << ',' << coverage(file.antibodies, u, t) << '\n';
  });
  std::cerr << "antibodies " << pop.size() << ", total fitness " << pop.total_fitness() << ", best "
            << pop.best_fitness() << '\n';
}

void experiment_cmd(const Options& o) {
  if (o.out.empty()) throw std::invalid_argument("--out directory is required");
  ExperimentConfig cfg;
  if (!o.universe.empty()) cfg.universe_path = o.universe;
  if (!o.base_problem.empty()) cfg.base_problem_path = o.base_problem;
  cfg.population_type = parse_population_type(o.type);
  cfg.ag_sample_sizes = o.ag_sample;
  cfg.thresholds = o.thresholds;
  cfg.replicates = o.replicates;
  cfg.phase2 = parse_phase2(o.phase2);
  cfg.op = parse_neighbor_operator(o.op);
  cfg.ga = ga_config(o);
  cfg.sa = {o.sa_t0, o.sa_tf, o.sa_alpha, cfg.op};
  cfg.gd.iterations = o.gd_iterations;
  cfg.gd.op = cfg.op;
  if (o.gd_stagnation > 0) {
    cfg.gd.stagnation_limit = o.gd_stagnation;
  } else {
    cfg.gd.stagnation_limit.reset();
  }
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.normalize();

  const ExperimentResult result = run_experiment(cfg);
  emit_reports(result, cfg, o.out);

  const auto& t = result.coverage;
  std::cout << "unmatched antigens (mean of " << cfg.replicates << ")\nthreshold";
  for (int ag : t.ag_sample_sizes) std::cout << "  Ag=" << ag;
  std::cout << '\n' << std::fixed << std::setprecision(1);
  for (std::size_t r = 0; r < t.thresholds.size(); ++r) {
    std::cout << std::setw(9) << t.thresholds[r];
    for (std::size_t c = 0; c < t.ag_sample_sizes.size(); ++c) std::cout << std::setw(6) << t.at(r, c);
    std::cout << '\n';
  }
  if (cfg.phase2 != Phase2::None) {
    for (const auto& sr : result.report.by_sample_size) {
      std::cout << "Ag=" << sr.ag_sample_size << " fitness improvement " << std::setprecision(2)
                << sr.improvement_pct << "%\n";
    }
  }
  std::cout << "reports written to " << o.out << '\n';
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--seed", o.seed, "Master random seed");
  app.add_option("--universe", o.universe, "Antigen universe file");
  app.add_option("--base-problem", o.base_problem, "Base problem file (15 jobs)");
  app.add_option("--type", o.type, "Antibody pool type")->check(CLI::IsMember({"a", "b", "c"}));
  app.add_option("--ag-sample", o.ag_sample, "Antigen sample size(s)")->delimiter(',');
  app.add_option("--thresholds", o.thresholds, "Match thresholds")->delimiter(',');
  app.add_option("--generations", o.generations);
  app.add_option("--crossover-rate", o.crossover_rate);
  app.add_option("--mutation-rate", o.mutation_rate);
  app.add_option("--tournament-size", o.tournament_size);
  app.add_option("--population-size", o.population_size);
  app.add_option("--phase2", o.phase2)->check(CLI::IsMember({"none", "sa", "gd"}));
  app.add_option("--operator", o.op)->check(CLI::IsMember({"change", "swap"}));
  app.add_option("--replicates", o.replicates);
  app.add_option("--sa-t0", o.sa_t0);
  app.add_option("--sa-tf", o.sa_tf);
  app.add_option("--sa-alpha", o.sa_alpha);
  app.add_option("--gd-iterations", o.gd_iterations);
  app.add_option("--gd-stagnation", o.gd_stagnation, "Steps without a new best before stopping (0 disables)");
  app.add_option("--threads", o.threads, "Worker threads for experiment (0 = hardware)");
  app.add_option("--out", o.out, "Output file, or directory for experiment");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antibody-based rescheduling experiments"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  add_common(app, o);

  auto* gen = app.add_subcommand("gen-universe", "Generate an antigen universe");
  auto* pool = app.add_subcommand("build-pool", "Write the antibody pool for a universe");
  auto* evo = app.add_subcommand("evolve", "Run the genetic algorithm on one antigen sample");
  auto* ref = app.add_subcommand("refine", "Refine a population with SA or GD");
  auto* eval = app.add_subcommand("evaluate", "Count unmatched antigens for a population");
  auto* exp = app.add_subcommand("experiment", "Run the full replicate experiment");

  evo->add_option("--stats", o.stats, "Per-generation CSV");
  ref->add_option("--population", o.population, "Population file")->check(CLI::ExistingFile);
  ref->add_option("--trace", o.trace, "Per-step CSV");
  eval->add_option("--population", o.population, "Population file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) gen_universe(o);
    if (*pool) build_pool(o);
    if (*evo) evolve_cmd(o);
    if (*ref) refine_cmd(o);
    if (*eval) evaluate_cmd(o);
    if (*exp) experiment_cmd(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
