#include "resched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace resched {

namespace {

constexpr std::uint32_t kUniverseStream = 1;
constexpr std::uint32_t kReplicateStream = 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string one_decimal(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << v;
  return os.str();
}

template <typename T>
std::string join(const std::vector<T>& values, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? sep : "") << values[i];
  return os.str();
}

std::ofstream open_report(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_coverage_csv(const CoverageTable& table, const std::filesystem::path& path) {
  auto out = open_report(path);
  out << "threshold";
  for (int ag : table.ag_sample_sizes) out << ',' << ag;
  out << '\n';
  for (std::size_t t = 0; t < table.thresholds.size(); ++t) {
    out << table.thresholds[t];
    for (std::size_t a = 0; a < table.ag_sample_sizes.size(); ++a) out << ',' << one_decimal(table.at(t, a));
    out << '\n';
  }
  finish(out, path);
}

ReplicateOutcome run_replicate(const ExperimentConfig& cfg, const AntigenUniverse& universe, const AntibodyPool& pool,
                               int replicate, int ag_size) {
  ReplicateOutcome out;
  out.replicate = replicate;
  out.ag_sample_size = ag_size;

  Rng rng = make_rng(cfg.seed, {kReplicateStream, static_cast<std::uint32_t>(replicate),
                                static_cast<std::uint32_t>(ag_size)});
  const AntigenSample sample = AntigenSample::draw(ag_size, rng);
  out.sample.assign(sample.indices().begin(), sample.indices().end());

  auto start = Clock::now();
  auto initial = sample_initial(pool, static_cast<std::size_t>(cfg.ga.population_size), rng);
  Population pop = evolve(Population::evaluate(std::move(initial), universe, sample), universe, sample, cfg.ga, rng);
  out.phase1_seconds = seconds_since(start);
  out.fitness_before = pop.total_fitness();
  for (int t : cfg.thresholds) out.unmatched_phase1.push_back(coverage(pop.antibodies(), universe, t));

  if (cfg.phase2 != Phase2::None) {
    RefineConfig rc;
    rc.method = cfg.phase2 == Phase2::SA ? RefineMethod::SA : RefineMethod::GD;
    rc.sa = cfg.sa;
    rc.gd = cfg.gd;
    rc.sa.op = rc.gd.op = cfg.op;
    start = Clock::now();
    pop = refine_population(pop, universe, sample, rc, rng());
    out.phase2_seconds = seconds_since(start);
    for (int t : cfg.thresholds) out.unmatched_final.push_back(coverage(pop.antibodies(), universe, t));
  } else {
    out.unmatched_final = out.unmatched_phase1;
  }
  out.fitness_after = pop.total_fitness();
  return out;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  if (cfg.universe_path) j["universe"] = cfg.universe_path->string();
  if (cfg.base_problem_path) j["base_problem"] = cfg.base_problem_path->string();
  j["type"] = to_string(cfg.population_type);
  j["ag_sample_sizes"] = cfg.ag_sample_sizes;
  j["thresholds"] = cfg.thresholds;
  j["replicates"] = cfg.replicates;
  j["phase2"] = to_string(cfg.phase2);
  j["operator"] = to_string(cfg.op);
  j["ga"] = {{"generations", cfg.ga.generations},
             {"crossover_rate", cfg.ga.crossover_rate},
             {"mutation_rate", cfg.ga.mutation_rate},
             {"tournament_size", cfg.ga.tournament_size},
             {"population_size", cfg.ga.population_size}};
  j["sa"] = {{"initial_temperature", cfg.sa.initial_temperature},
             {"final_temperature", cfg.sa.final_temperature},
             {"cooling_factor", cfg.sa.cooling_factor}};
  j["gd"] = {{"iterations", cfg.gd.iterations},
             {"stagnation_limit", cfg.gd.stagnation_limit ? nlohmann::json(*cfg.gd.stagnation_limit) : nlohmann::json()}};
  return j;
}

}  // namespace

std::string_view to_string(Phase2 phase2) {
  switch (phase2) {
    case Phase2::None: return "none";
    case Phase2::SA: return "sa";
    case Phase2::GD: return "gd";
  }
  return "?";
}

Phase2 parse_phase2(std::string_view text) {
  if (text == "none") return Phase2::None;
  if (text == "sa") return Phase2::SA;
  if (text == "gd") return Phase2::GD;
  throw std::invalid_argument("unknown phase2 '" + std::string(text) + "' (expected none, sa or gd)");
}

void ExperimentConfig::normalize() {
  auto sort_unique = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  sort_unique(ag_sample_sizes);
  sort_unique(thresholds);
  if (ag_sample_sizes.empty()) throw std::invalid_argument("at least one antigen sample size is required");
  if (ag_sample_sizes.front() < 1 || ag_sample_sizes.back() > kUniverseSize)
    throw std::invalid_argument("antigen sample sizes must lie in 1..10");
  if (thresholds.empty()) throw std::invalid_argument("at least one matching threshold is required");
  if (thresholds.front() < 0 || thresholds.back() > kAntibodyLength)
    throw std::invalid_argument("matching thresholds must lie in 0..5");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  ga.validate();
  sa.validate();
  gd.validate();
}

CoverageTable::CoverageTable(std::vector<int> t, std::vector<int> a)
    : thresholds(std::move(t)), ag_sample_sizes(std::move(a)), cells(thresholds.size() * ag_sample_sizes.size(), 0.0) {}

double CoverageTable::at(std::size_t t, std::size_t a) const { return cells.at(t * ag_sample_sizes.size() + a); }
double& CoverageTable::at(std::size_t t, std::size_t a) { return cells.at(t * ag_sample_sizes.size() + a); }

int coverage(std::span<const Antibody> antibodies, const AntigenUniverse& universe, int threshold) {
  int unmatched = 0;
  for (const auto& antigen : universe.antigens()) {
    const bool hit = std::any_of(antibodies.begin(), antibodies.end(),
                                 [&](const Antibody& ab) { return is_matched(antigen, ab, threshold); });
    unmatched += !hit;
  }
  return unmatched;
}

double fitness_improvement(std::span<const long> before, std::span<const long> after) {
  if (before.size() != after.size())
    throw std::invalid_argument("fitness totals differ in length: " + std::to_string(before.size()) + " vs " +
                                std::to_string(after.size()));
  const long sum_before = std::accumulate(before.begin(), before.end(), 0L);
  const long sum_after = std::accumulate(after.begin(), after.end(), 0L);
  if (sum_before == 0) throw std::domain_error("fitness improvement undefined: total fitness before is 0");
  return 100.0 * static_cast<double>(sum_after - sum_before) / static_cast<double>(sum_before);
}

AntigenUniverse resolve_universe(const ExperimentConfig& cfg) {
  if (cfg.universe) return *cfg.universe;
  if (cfg.universe_path) return load_universe(*cfg.universe_path);
  const BaseProblem base = cfg.base_problem_path ? load_base_problem(*cfg.base_problem_path) : default_base_problem();
  Rng rng = make_rng(cfg.seed, {kUniverseStream});
  return generate_universe(base, rng);
}

ExperimentResult run_experiment(ExperimentConfig cfg) {
  cfg.normalize();

  auto start = Clock::now();
  AntigenUniverse universe = resolve_universe(cfg);
  const double universe_seconds = seconds_since(start);

  start = Clock::now();
  const AntibodyPool pool = generate_pool(build_libraries(universe), cfg.population_type);
  const double pool_seconds = seconds_since(start);
  if (pool.size() < static_cast<std::size_t>(cfg.ga.population_size)) {
    throw std::runtime_error("pool of " + std::to_string(pool.size()) + " antibodies is smaller than population size " +
                             std::to_string(cfg.ga.population_size));
  }

  const std::size_t n_ag = cfg.ag_sample_sizes.size();
  const std::size_t n_tasks = static_cast<std::size_t>(cfg.replicates) * n_ag;
  std::vector<ReplicateOutcome> outcomes(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const int r = static_cast<int>(task / n_ag);
      const int ag = cfg.ag_sample_sizes[task % n_ag];
      try {
        outcomes[task] = run_replicate(cfg, universe, pool, r, ag);
      } catch (...) {
        errors[task] = std::current_exception();
      }
    }
  };
  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1u, static_cast<unsigned>(n_tasks));
  {
    std::vector<std::jthread> pool_threads;
    for (unsigned t = 1; t < n_threads; ++t) pool_threads.emplace_back(worker);
    worker();
  }
  for (std::size_t task = 0; task < n_tasks; ++task) {
    if (!errors[task]) continue;
    const std::string where = "replicate " + std::to_string(task / n_ag) +
                              " (Ag=" + std::to_string(cfg.ag_sample_sizes[task % n_ag]) + ")";
    try {
      std::rethrow_exception(errors[task]);
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }

  ExperimentResult result{std::move(universe), CoverageTable(cfg.thresholds, cfg.ag_sample_sizes),
                          CoverageTable(cfg.thresholds, cfg.ag_sample_sizes), RunReport{}};
  auto& report = result.report;
  report.pool_size = pool.size();
  report.universe_seconds = universe_seconds;
  report.pool_seconds = pool_seconds;

  for (std::size_t a = 0; a < n_ag; ++a) {
    SampleSizeReport sr;
    sr.ag_sample_size = cfg.ag_sample_sizes[a];
    for (int r = 0; r < cfg.replicates; ++r) {
      const auto& o = outcomes[static_cast<std::size_t>(r) * n_ag + a];
      sr.before.push_back(o.fitness_before);
      sr.after.push_back(o.fitness_after);
      sr.phase1_seconds += o.phase1_seconds;
      sr.phase2_seconds += o.phase2_seconds;
      for (std::size_t t = 0; t < cfg.thresholds.size(); ++t) {
        result.phase1.at(t, a) += o.unmatched_phase1[t];
        result.coverage.at(t, a) += o.unmatched_final[t];
      }
    }
    for (std::size_t t = 0; t < cfg.thresholds.size(); ++t) {
      result.phase1.at(t, a) /= cfg.replicates;
      result.coverage.at(t, a) /= cfg.replicates;
    }
    sr.improvement_pct = fitness_improvement(sr.before, sr.after);
    report.by_sample_size.push_back(std::move(sr));
  }
  report.replicates = std::move(outcomes);
  return result;
}

void emit_reports(const ExperimentResult& result, const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& report = result.report;

  write_coverage_csv(result.coverage, dir / "coverage.csv");
  if (cfg.phase2 != Phase2::None) write_coverage_csv(result.phase1, dir / "coverage_phase1.csv");

  {
    const auto path = dir / "fitness.csv";
    auto out = open_report(path);
    out << "ag_sample_size,fitness_before,fitness_after,improvement_pct\n";
    for (const auto& sr : report.by_sample_size) {
      out << sr.ag_sample_size << ',' << std::accumulate(sr.before.begin(), sr.before.end(), 0L) << ','
          << std::accumulate(sr.after.begin(), sr.after.end(), 0L) << ',' << std::fixed << std::setprecision(2)
          << sr.improvement_pct << std::defaultfloat << '\n';
    }
    finish(out, path);
  }

  {
    const auto path = dir / "timings.csv";
    auto out = open_report(path);
    out << "stage,ag_sample_size,seconds\n";
    out << "universe,," << report.universe_seconds << '\n';
    out << "pool,," << report.pool_seconds << '\n';
    for (const auto& sr : report.by_sample_size) {
      out << "phase1," << sr.ag_sample_size << ',' << sr.phase1_seconds << '\n';
      if (cfg.phase2 != Phase2::None) out << "phase2," << sr.ag_sample_size << ',' << sr.phase2_seconds << '\n';
    }
    finish(out, path);
  }

  const auto universe_file = std::filesystem::absolute(dir / "universe.txt");
  save_universe(result.universe, universe_file);

  {
    nlohmann::json manifest;
    manifest["config"] = config_json(cfg);
    manifest["universe_file"] = universe_file.string();
    manifest["pool_size"] = report.pool_size;
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& o : report.replicates) {
      reps.push_back({{"replicate", o.replicate},
                      {"ag_sample_size", o.ag_sample_size},
                      {"sample", o.sample},
                      {"unmatched_phase1", o.unmatched_phase1},
                      {"unmatched_final", o.unmatched_final},
                      {"fitness_before", o.fitness_before},
                      {"fitness_after", o.fitness_after},
                      {"phase1_seconds", o.phase1_seconds},
                      {"phase2_seconds", o.phase2_seconds}});
    }
    manifest["replicates"] = reps;
    manifest["timings"] = {{"universe_seconds", report.universe_seconds}, {"pool_seconds", report.pool_seconds}};
    const auto path = dir / "run.json";
    auto out = open_report(path);
    out << manifest.dump(2) << '\n';
    finish(out, path);
  }

  {
    // key=value form accepted by `resched experiment --config`
    const auto path = dir / "run.cfg";
    auto out = open_report(path);
    out << "seed=" << cfg.seed << '\n'
        << "universe=\"" << universe_file.string() << "\"\n"
        << "type=" << to_string(cfg.population_type) << '\n'
        << "ag-sample=[" << join(cfg.ag_sample_sizes, ",") << "]\n"
        << "thresholds=[" << join(cfg.thresholds, ",") << "]\n"
        << "replicates=" << cfg.replicates << '\n'
        << "generations=" << cfg.ga.generations << '\n'
        << "crossover-rate=" << shortest(cfg.ga.crossover_rate) << '\n'
        << "mutation-rate=" << shortest(cfg.ga.mutation_rate) << '\n'
        << "tournament-size=" << cfg.ga.tournament_size << '\n'
        << "population-size=" << cfg.ga.population_size << '\n'
        << "phase2=" << to_string(cfg.phase2) << '\n'
        << "operator=" << to_string(cfg.op) << '\n'
        << "sa-t0=" << shortest(cfg.sa.initial_temperature) << '\n'
        << "sa-tf=" << shortest(cfg.sa.final_temperature) << '\n'
        << "sa-alpha=" << shortest(cfg.sa.cooling_factor) << '\n'
        << "gd-iterations=" << cfg.gd.iterations << '\n'
        << "gd-stagnation=" << cfg.gd.stagnation_limit.value_or(0) << '\n';
    finish(out, path);
  }
}

CoverageTable read_coverage_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty coverage file");
  auto header = split(line);
  if (header.empty() || header.front() != "threshold") throw ParseError(1, "expected 'threshold' header");
  std::vector<int> ags;
  for (std::size_t i = 1; i < header.size(); ++i) ags.push_back(std::stoi(header[i]));
  std::vector<std::vector<std::string>> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != header.size()) throw ParseError(n, "column count differs from header");
    rows.push_back(std::move(row));
  }
  std::vector<int> thresholds;
  for (const auto& row : rows) thresholds.push_back(std::stoi(row.front()));
  CoverageTable table(thresholds, ags);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t a = 0; a < ags.size(); ++a) table.at(t, a) = std::stod(rows[t][a + 1]);
  }
  return table;
}

}  // namespace resched
