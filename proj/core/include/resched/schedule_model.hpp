#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resched/types.hpp"

namespace resched {

// Raised by the text-format readers; carries the 1-based line number when
// the problem can be pinned to one line (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const noexcept { return line_; }

  // Same error, message prefixed with the file it came from.
  ParseError in_file(const std::filesystem::path& path) const;

 private:
  struct Verbatim {};
  ParseError(Verbatim, int line, const std::string& message);
  int line_;
};

inline constexpr int kMaxArrivalDraw = 300;
inline constexpr double kScenarioMutationProbability = 0.2;

struct Job {
  JobId id = 0;
  int processing_time = 0;
  int due_date = 0;
  int arrival_date = 0;

  // arrival must be at least processing_time days before the due date
  int latest_arrival() const { return due_date - processing_time; }

  friend bool operator==(const Job&, const Job&) = default;
};

// Fifteen single-machine jobs with ids 1..15, stored in id order.
class BaseProblem {
 public:
  explicit BaseProblem(std::vector<Job> jobs);

  std::span<const Job> jobs() const { return jobs_; }
  const Job& job(JobId id) const { return jobs_[static_cast<std::size_t>(id - 1)]; }

  friend bool operator==(const BaseProblem&, const BaseProblem&) = default;

 private:
  std::vector<Job> jobs_;
};

// A full schedule: the order of all 15 jobs on the machine.
class Antigen {
 public:
  explicit Antigen(std::span<const JobId> sequence);
  static Antigen identity();

  std::span<const JobId> sequence() const { return sequence_; }
  JobId operator[](std::size_t i) const { return sequence_[i]; }

  friend bool operator==(const Antigen&, const Antigen&) = default;

 private:
  Antigen() = default;
  std::array<JobId, kJobCount> sequence_{};
};

bool is_permutation_of_jobs(std::span<const JobId> sequence);

class AntigenUniverse {
 public:
  explicit AntigenUniverse(std::vector<Antigen> antigens);

  std::span<const Antigen> antigens() const { return antigens_; }
  const Antigen& operator[](std::size_t i) const { return antigens_.at(i); }
  std::size_t size() const { return antigens_.size(); }

  friend bool operator==(const AntigenUniverse&, const AntigenUniverse&) = default;

 private:
  std::vector<Antigen> antigens_;
};

// Moves `draw` into the job's arrival slot, clamped down to due - p.
Job with_arrival(Job job, int draw);

// Each job independently, with `probability`, receives a fresh arrival date
// drawn from 0..300 (clamped to the latest feasible arrival).
BaseProblem mutate_scenario(const BaseProblem& base, double probability, Rng& rng);

// Earliest-due-date dispatch on one machine, ties by smaller id; idles to the
// next arrival when nothing is released.
Antigen schedule_scenario(const BaseProblem& scenario);

AntigenUniverse generate_universe(const BaseProblem& base, Rng& rng,
                                  double probability = kScenarioMutationProbability);

// Processing times in 1..20, due dates in 30..300, feasible arrivals.
BaseProblem synthetic_base_problem(std::uint64_t seed);
BaseProblem default_base_problem();

AntigenUniverse read_universe(std::istream& in);
void write_universe(std::ostream& out, const AntigenUniverse& universe);
AntigenUniverse load_universe(const std::filesystem::path& path);
void save_universe(const AntigenUniverse& universe, const std::filesystem::path& path);

BaseProblem read_base_problem(std::istream& in);
void write_base_problem(std::ostream& out, const BaseProblem& base);
BaseProblem load_base_problem(const std::filesystem::path& path);
void save_base_problem(const BaseProblem& base, const std::filesystem::path& path);

}  // namespace resched
