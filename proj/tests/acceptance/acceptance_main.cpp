// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "resched/experiment.hpp"
#include "test_support.hpp"

using namespace resched;
using testing_support::as_vector;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = elapsed(start);
  std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << id << " " << title << " (" << std::fixed << std::setprecision(2)
            << secs << " s) " << v.detail.str() << std::endl;
  if (!v.pass) ++failures;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Unmatched counts must not fall as the threshold rises.
bool row_monotone(const std::vector<int>& unmatched) {
  for (std::size_t t = 1; t < unmatched.size(); ++t) {
    if (unmatched[t - 1] > unmatched[t]) return false;
  }
  return true;
}

void check_rows(Verdict& v, const ExperimentResult& r) {
  for (const auto& o : r.report.replicates) {
    v.require(row_monotone(o.unmatched_phase1), "phase I row trend, replicate " + std::to_string(o.replicate));
    v.require(row_monotone(o.unmatched_final), "final row trend, replicate " + std::to_string(o.replicate));
  }
}

}  // namespace

int main() {
  std::vector<ExperimentResult> produced;  // every run below feeds AC4

  criterion("AC1", "best_match equals brute force on 1000 random pairs in < 1 s", [](Verdict& v) {
    Rng rng = make_rng(1);
    const auto start = Clock::now();
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
      const Antigen a = testing_support::random_antigen(rng);
      const Antibody b = testing_support::random_antibody(rng);
      const int want = oracle::brute_best_count(as_vector(a.sequence()), as_vector(b.jobs));
      const MatchResult got = best_match(a, b);
      mismatches += got.best_count != want || got.best_score != 5 * want;
    }
    const double secs = elapsed(start);
    v.detail << "mismatches=" << mismatches << " runtime=" << secs << "s ";
    v.require(mismatches == 0, "mismatch against brute force");
    v.require(secs < 1.0, "runtime >= 1 s");
  });

  criterion("AC2", "worked pair scores 15 at offset 3", [](Verdict& v) {
    const MatchResult r = best_match(testing_support::worked_antigen(), testing_support::antibody({4, 3, 9, 5, 12}));
    v.detail << "score=" << r.best_score << " offset=" << r.best_offset << ' ';
    v.require(r.best_score == 15 && r.best_offset == 3 && r.best_count == 3, "golden match");
  });

  criterion("AC3", "pool laws over 10 seeded universes in < 5 s", [](Verdict& v) {
    const auto start = Clock::now();
    std::set<std::vector<int>> distinct_universes;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng = make_rng(seed);
      const AntigenUniverse u = generate_universe(default_base_problem(), rng);
      std::vector<int> flat;
      for (const auto& ag : u.antigens()) flat.insert(flat.end(), ag.sequence().begin(), ag.sequence().end());
      distinct_universes.insert(flat);

      const LibrarySet libs = build_libraries(u);
      const auto a = generate_pool(libs, PopulationType::A);
      const auto b = generate_pool(libs, PopulationType::B);
      const auto c = generate_pool(libs, PopulationType::C);
      v.detail << "[" << a.size() << "/" << b.size() << "/" << c.size() << "]";
      v.require(a.size() <= 6000, "|A| <= 6000");
      v.require(a.size() >= c.size() && c.size() >= b.size(), "|A| >= |C| >= |B|");
      for (const auto* pool : {&a, &b, &c}) {
        for (const auto& ab : pool->antibodies) v.require(ab.valid(), "5 distinct jobs");
      }
      for (int i = 0; i < kLibraryCount; ++i) {
        for (int j = i + 1; j < kLibraryCount; ++j) {
          for (const auto& ci : libs.libraries[static_cast<std::size_t>(i)].components) {
            for (const auto& cj : libs.libraries[static_cast<std::size_t>(j)].components) {
              std::set<int> six(ci.jobs.begin(), ci.jobs.end());
              six.insert(cj.jobs.begin(), cj.jobs.end());
              if (six.size() == 6) v.require(combine_components(ci, cj).size() == 6, "C(6,5) = 6 candidates");
            }
          }
        }
      }
    }
    const double secs = elapsed(start);
    v.detail << " runtime=" << secs << "s ";
    v.require(distinct_universes.size() == 10, "10 distinct universes");
    v.require(secs < 5.0, "runtime >= 5 s");
  });

  // Default experiment: Type A, mutation 0.2, 250 generations, 10 replicates.
  criterion("AC5", "unmatched count non-increasing in Ag (slack 0.5), defaults, < 5 min", [&](Verdict& v) {
    const auto start = Clock::now();
    ExperimentConfig cfg;
    cfg.seed = 1;
    ExperimentResult r = run_experiment(cfg);
    const double secs = elapsed(start);
    const auto& t = r.phase1;
    for (std::size_t row = 0; row < t.thresholds.size(); ++row) {
      v.detail << "t" << t.thresholds[row] << ":";
      for (std::size_t col = 0; col < t.ag_sample_sizes.size(); ++col) {
        v.detail << (col ? "," : "") << t.at(row, col);
        if (col > 0) {
          v.require(t.at(row, col) <= t.at(row, col - 1) + 0.5,
                    "t=" + std::to_string(t.thresholds[row]) + " Ag=" + std::to_string(t.ag_sample_sizes[col]));
        }
      }
      v.detail << ' ';
    }
    v.detail << "runtime=" << secs << "s ";
    v.require(secs < 300.0, "runtime >= 5 min");
    produced.push_back(std::move(r));
  });

  criterion("AC6a", "phase II never lowers total fitness (SA/GD x change/swap)", [&](Verdict& v) {
    for (auto phase2 : {Phase2::SA, Phase2::GD}) {
      for (auto op : {NeighborOperator::ChangeOneJob, NeighborOperator::SwapTwoJobs}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
          ExperimentConfig cfg;
          cfg.seed = seed;
          cfg.phase2 = phase2;
          cfg.op = op;
          cfg.replicates = 3;
          ExperimentResult r = run_experiment(cfg);
          for (const auto& o : r.report.replicates) {
            v.require(o.fitness_after >= o.fitness_before,
                      std::string(to_string(phase2)) + "/" + std::string(to_string(op)) + " seed " +
                          std::to_string(seed) + " replicate " + std::to_string(o.replicate));
          }
          for (const auto& sr : r.report.by_sample_size) v.require(sr.improvement_pct >= 0.0, "improvement >= 0");
          produced.push_back(std::move(r));
        }
      }
    }
  });

  for (auto phase2 : {Phase2::SA, Phase2::GD}) {
    const std::string name = phase2 == Phase2::SA ? "AC6b-SA" : "AC6b-GD";
    criterion(name, "improvement at Ag=1 > Ag=8 in >= 8 of 10 repetitions (Type A, mutation 0.001)", [&](Verdict& v) {
      int wins = 0;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ExperimentConfig cfg;
        cfg.seed = seed;
        cfg.phase2 = phase2;
        cfg.ga.mutation_rate = 0.001;
        ExperimentResult r = run_experiment(cfg);
        const auto& by = r.report.by_sample_size;
        const double ag1 = by.front().improvement_pct;
        const double ag8 = by.back().improvement_pct;
        v.detail << std::setprecision(1) << ag1 << "/" << ag8 << ' ';
        wins += ag1 > ag8;
        produced.push_back(std::move(r));
      }
      v.detail << "wins=" << wins << "/10 ";
      v.require(wins >= 8, "fewer than 8 wins");
    });
  }

  criterion("AC4", "unmatched count non-decreasing in threshold for every population", [&](Verdict& v) {
    std::size_t populations = 0;
    for (const auto& r : produced) {
      check_rows(v, r);
      populations += r.report.replicates.size() * 2;
    }
    v.detail << "populations=" << populations << ' ';
    v.require(populations > 0, "no populations produced");
  });

  criterion("AC7", "great deluge level reaches f(EQ); beta = -1/24", [](Verdict& v) {
    const double beta = gd_decay_rate(20, 25, 120);
    v.require(beta == -1.0 / 24.0, "beta for f0=20, f(EQ)=25, iter=120");

    // an antibody scoring exactly 20 against one antigen
    const Antigen ag = Antigen::identity();
    std::vector<Antigen> all(kUniverseSize, ag);
    const AntigenUniverse u(all);
    const AntigenSample sample({0});
    const Antibody start = testing_support::antibody({1, 2, 3, 4, 15});
    v.require(antibody_fitness(start, u, sample) == 20, "start fitness 20");

    GDConfig cfg;
    cfg.stagnation_limit.reset();
    Rng rng = make_rng(5);
    const RefineResult r = gd_refine(start, u, sample, cfg, rng);
    v.detail << "steps=" << r.steps << " final boundary=" << std::setprecision(12) << r.final_level << ' ';
    v.require(r.steps == 120, "120 updates");
    v.require(std::abs(r.final_level - max_fitness(1)) <= 1e-9, "boundary == f(EQ)");
  });

  criterion("AC8", "SA defaults take 570 temperature steps; P(accept | delta=0) = 1", [](Verdict& v) {
    const int steps = sa_temperature_steps(SAConfig{});
    const int oracle_steps = oracle::cooling_steps(5000.0, 0.05, 0.98);
    v.detail << "steps=" << steps << " oracle=" << oracle_steps << ' ';
    v.require(steps == 570 && oracle_steps == 570, "570 steps");
    v.require(sa_acceptance_probability(0.0, 5000.0) == 1.0, "delta=0 acceptance");
    v.require(sa_acceptance_probability(0.0, 0.05) == 1.0, "delta=0 acceptance at T_f");

    Rng urng = make_rng(3);
    const AntigenUniverse u = testing_support::random_universe(urng);
    Rng rng = make_rng(4);
    const RefineResult r = sa_refine(testing_support::random_antibody(rng), u, AntigenSample({1}), SAConfig{}, rng);
    v.require(r.steps == 570, "sa_refine runs 570 steps");
  });

  criterion("AC9", "GA best fitness monotone over 250 generations; crossover preserves job sets", [](Verdict& v) {
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng urng = make_rng(seed);
      const AntigenUniverse u = generate_universe(default_base_problem(), urng);
      const auto pool = generate_pool(build_libraries(u), PopulationType::A);
      for (int ag : {1, 4, 8}) {
        for (double mutation : {0.2, 0.001}) {
          Rng rng = make_rng(seed, {static_cast<std::uint32_t>(ag)});
          const AntigenSample sample = AntigenSample::draw(ag, rng);
          GAConfig cfg;
          cfg.mutation_rate = mutation;
          int last = -1;
          int generations = 0;
          evolve(Population::evaluate(sample_initial(pool, 100, rng), u, sample), u, sample, cfg, rng,
                 [&](const GenerationStats& s) {
                   v.require(s.best >= last, "best dropped at generation " + std::to_string(s.generation));
                   last = s.best;
                   ++generations;
                 });
          v.require(generations == 251, "251 observed generations");
          ++runs;
        }
      }
    }
    Rng rng = make_rng(99);
    for (int i = 0; i < 10000; ++i) {
      const Antibody p1 = testing_support::random_antibody(rng);
      const Antibody p2 = testing_support::random_antibody(rng);
      const auto [c1, c2] = order_crossover(p1, p2);
      v.require(c1.valid() && c2.valid(), "duplicate job after crossover");
      v.require(std::set<int>(c1.jobs.begin(), c1.jobs.end()) == std::set<int>(p1.jobs.begin(), p1.jobs.end()),
                "child1 job set");
      v.require(std::set<int>(c2.jobs.begin(), c2.jobs.end()) == std::set<int>(p2.jobs.begin(), p2.jobs.end()),
                "child2 job set");
    }
    v.detail << "GA runs=" << runs << " crossover pairs=10000 ";
  });

  criterion("AC10", "byte-identical CSVs on rerun; one replicate well under 2 min", [](Verdict& v) {
    const auto dir = std::filesystem::temp_directory_path() / "resched_acceptance_ac10";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg;
    cfg.seed = 2008;
    cfg.phase2 = Phase2::SA;
    cfg.replicates = 3;
    emit_reports(run_experiment(cfg), cfg, dir / "first");
    emit_reports(run_experiment(cfg), cfg, dir / "second");
    for (const char* f : {"coverage.csv", "coverage_phase1.csv", "fitness.csv"}) {
      const std::string a = slurp(dir / "first" / f);
      v.require(!a.empty() && a == slurp(dir / "second" / f), std::string(f) + " differs");
    }

    // one replicate, every sample size, from universe to Phase II
    for (auto phase2 : {Phase2::SA, Phase2::GD}) {
      ExperimentConfig one;
      one.seed = 7;
      one.replicates = 1;
      one.threads = 1;
      one.ag_sample_sizes = {8};
      one.phase2 = phase2;
      const auto start = Clock::now();
      run_experiment(one);
      const double secs = elapsed(start);
      v.detail << to_string(phase2) << " replicate=" << std::setprecision(2) << secs << "s ";
      v.require(secs < 60.0, "single replicate took >= 60 s");
    }
    std::filesystem::remove_all(dir);
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
