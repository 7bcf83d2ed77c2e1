#include <doctest.h>

#include <fstream>
#include <sstream>

#include "resched/experiment.hpp"
#include "test_support.hpp"

using namespace resched;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.replicates = 2;
  cfg.ga.generations = 15;
  cfg.seed = 77;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("coverage") {
  Rng rng = make_rng(2);
  const AntigenUniverse u = testing_support::random_universe(rng);

  CHECK(coverage({}, u, 2) == 10);
  CHECK(coverage({}, u, 0) == 10);

  std::vector<Antibody> pop{testing_support::prefix_of(u[4])};
  CHECK(coverage(pop, u, 5) <= 9);
  for (int t = 0; t <= 5; ++t) {
    // antigen 4 is always matched by its own prefix
    CHECK(coverage(pop, u, t) <= 9);
  }

  for (int i = 0; i < 50; ++i) pop.push_back(testing_support::random_antibody(rng));
  for (int t = 1; t <= 5; ++t) CHECK(coverage(pop, u, t - 1) <= coverage(pop, u, t));

  std::vector<Antibody> grown;
  int last = 10;
  for (const auto& ab : pop) {
    grown.push_back(ab);
    const int now = coverage(grown, u, 3);
    CHECK(now <= last);
    last = now;
  }
}

TEST_CASE("fitness_improvement") {
  const std::vector<long> before{400, 600};
  CHECK(fitness_improvement(before, before) == 0.0);
  const std::vector<long> after{500, 785};
  CHECK(fitness_improvement(before, after) == doctest::Approx(28.5));

  const std::vector<long> zeros{0, 0};
  CHECK_THROWS_AS(fitness_improvement(zeros, zeros), std::domain_error);
  const std::vector<long> short_list{1};
  CHECK_THROWS_AS(fitness_improvement(before, short_list), std::invalid_argument);
}

TEST_CASE("config normalisation") {
  ExperimentConfig cfg;
  cfg.ag_sample_sizes = {8, 1, 4, 4};
  cfg.thresholds = {5, 2};
  cfg.normalize();
  CHECK(cfg.ag_sample_sizes == std::vector<int>{1, 4, 8});
  CHECK(cfg.thresholds == std::vector<int>{2, 5});

  cfg.ag_sample_sizes = {11};
  CHECK_THROWS_AS(cfg.normalize(), std::invalid_argument);
  cfg = {};
  cfg.thresholds = {6};
  CHECK_THROWS_AS(cfg.normalize(), std::invalid_argument);
  CHECK(parse_phase2("gd") == Phase2::GD);
  CHECK_THROWS_AS(parse_phase2("tabu"), std::invalid_argument);
}

TEST_CASE("run_experiment") {
  ExperimentConfig cfg = small_config();
  cfg.phase2 = Phase2::SA;
  const ExperimentResult a = run_experiment(cfg);

  CHECK(a.report.replicates.size() == 6);
  CHECK(a.coverage.ag_sample_sizes == std::vector<int>{1, 4, 8});
  for (std::size_t t = 0; t < a.coverage.thresholds.size(); ++t) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(a.coverage.at(t, c) >= 0.0);
      CHECK(a.coverage.at(t, c) <= 10.0);
      if (t > 0) {
        CHECK(a.coverage.at(t - 1, c) <= a.coverage.at(t, c));
        CHECK(a.phase1.at(t - 1, c) <= a.phase1.at(t, c));
      }
    }
  }
  for (const auto& sr : a.report.by_sample_size) {
    CHECK(sr.improvement_pct >= 0.0);
    for (std::size_t r = 0; r < sr.before.size(); ++r) CHECK(sr.after[r] >= sr.before[r]);
  }

  SUBCASE("thread count does not change results") {
    ExperimentConfig serial = cfg;
    serial.threads = 1;
    const ExperimentResult b = run_experiment(serial);
    CHECK(b.coverage == a.coverage);
    CHECK(b.phase1 == a.phase1);
    for (std::size_t i = 0; i < a.report.replicates.size(); ++i) {
      CHECK(b.report.replicates[i].fitness_after == a.report.replicates[i].fitness_after);
      CHECK(b.report.replicates[i].sample == a.report.replicates[i].sample);
    }
  }

  SUBCASE("without phase II the final table is the phase I table") {
    ExperimentConfig none = cfg;
    none.phase2 = Phase2::None;
    const ExperimentResult b = run_experiment(none);
    CHECK(b.coverage == b.phase1);
    CHECK(b.phase1 == a.phase1);
    for (const auto& sr : b.report.by_sample_size) CHECK(sr.improvement_pct == 0.0);
  }
}

TEST_CASE("run_experiment rejects a pool smaller than the population") {
  ExperimentConfig cfg = small_config();
  cfg.ga.population_size = 100;
  std::vector<Antigen> same(kUniverseSize, Antigen::identity());
  cfg.universe = AntigenUniverse(same);
  cfg.population_type = PopulationType::B;  // only 60 distinct antibodies
  CHECK_THROWS_WITH(run_experiment(cfg), doctest::Contains("smaller than population size"));
}

TEST_CASE("emit_reports") {
  const auto dir = std::filesystem::temp_directory_path() / "resched_emit_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = small_config();
  cfg.replicates = 2;
  cfg.phase2 = Phase2::GD;
  const ExperimentResult r = run_experiment(cfg);
  emit_reports(r, cfg, dir / "one");
  emit_reports(run_experiment(cfg), cfg, dir / "two");

  for (const char* f : {"coverage.csv", "coverage_phase1.csv", "fitness.csv", "universe.txt"}) {
    CHECK_MESSAGE(slurp(dir / "one" / f) == slurp(dir / "two" / f), f);
  }
  CHECK(std::filesystem::exists(dir / "one" / "run.json"));
  CHECK(std::filesystem::exists(dir / "one" / "timings.csv"));
  CHECK(std::filesystem::exists(dir / "one" / "run.cfg"));

  const std::string csv = slurp(dir / "one" / "coverage.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "threshold,1,4,8");

  // two replicates: every mean is a multiple of 0.5, so one decimal is exact
  const CoverageTable parsed = read_coverage_csv(dir / "one" / "coverage.csv");
  CHECK(parsed == r.coverage);
  CHECK(load_universe(dir / "one" / "universe.txt") == r.universe);

  std::filesystem::remove_all(dir);
}
