#include "resched/schedule_model.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace resched {

namespace {

constexpr std::uint32_t kSyntheticStream = 0x5eedu;
constexpr std::uint64_t kDefaultBaseSeed = 11;

// Yields the non-blank, non-comment lines of a text stream with their
// 1-based line numbers.
class DataLines {
 public:
  explicit DataLines(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

std::vector<long long> parse_integers(const std::string& line, int line_no) {
  std::istringstream is(line);
  std::vector<long long> values;
  std::string token;
  while (is >> token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError(line_no, "not an integer: '" + token + "'");
    values.push_back(v);
  }
  return values;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void check_job(const Job& job) {
  const std::string tag = "job " + std::to_string(job.id) + ": ";
  if (!valid_job(job.id)) throw std::invalid_argument(tag + "id out of range 1..15");
  if (job.processing_time < 0 || job.due_date < 0 || job.arrival_date < 0)
    throw std::invalid_argument(tag + "negative field");
  if (job.arrival_date > job.latest_arrival())
    throw std::invalid_argument(tag + "arrival " + std::to_string(job.arrival_date) +
                                " later than due - p = " + std::to_string(job.latest_arrival()));
}

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

ParseError::ParseError(Verbatim, int line, const std::string& message)
    : std::runtime_error(message), line_(line) {}

ParseError ParseError::in_file(const std::filesystem::path& path) const {
  return ParseError(Verbatim{}, line_, path.string() + ": " + what());
}

BaseProblem::BaseProblem(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
  if (jobs_.size() != static_cast<std::size_t>(kJobCount))
    throw std::invalid_argument("base problem needs exactly 15 jobs, got " + std::to_string(jobs_.size()));
  for (const auto& job : jobs_) check_job(job);
  std::sort(jobs_.begin(), jobs_.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
  for (int i = 0; i < kJobCount; ++i) {
    if (jobs_[static_cast<std::size_t>(i)].id != i + 1)
      throw std::invalid_argument("base problem job ids must be exactly 1..15");
  }
}

bool is_permutation_of_jobs(std::span<const JobId> sequence) {
  return sequence.size() == static_cast<std::size_t>(kJobCount) && distinct_jobs(sequence);
}

Antigen::Antigen(std::span<const JobId> sequence) {
  if (!is_permutation_of_jobs(sequence))
    throw std::invalid_argument("antigen must be a permutation of 1..15");
  std::copy(sequence.begin(), sequence.end(), sequence_.begin());
}

Antigen Antigen::identity() {
  Antigen a;
  std::iota(a.sequence_.begin(), a.sequence_.end(), 1);
  return a;
}

AntigenUniverse::AntigenUniverse(std::vector<Antigen> antigens) : antigens_(std::move(antigens)) {
  if (antigens_.size() != static_cast<std::size_t>(kUniverseSize))
    throw std::invalid_argument("expected 10 antigens, got " + std::to_string(antigens_.size()));
}

Job with_arrival(Job job, int draw) {
  job.arrival_date = std::min(draw, job.latest_arrival());
  return job;
}

BaseProblem mutate_scenario(const BaseProblem& base, double probability, Rng& rng) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw std::invalid_argument("mutation probability must lie in [0,1]");
  std::bernoulli_distribution hit(probability);
  std::uniform_int_distribution<int> arrival(0, kMaxArrivalDraw);
  std::vector<Job> jobs(base.jobs().begin(), base.jobs().end());
  for (auto& job : jobs) {
    if (hit(rng)) job = with_arrival(job, arrival(rng));
  }
  return BaseProblem(std::move(jobs));
}

Antigen schedule_scenario(const BaseProblem& scenario) {
  std::array<JobId, kJobCount> sequence{};
  std::array<bool, kJobCount> done{};
  long long now = 0;
  for (int placed = 0; placed < kJobCount; ++placed) {
    const Job* pick = nullptr;
    long long next_arrival = std::numeric_limits<long long>::max();
    for (const auto& job : scenario.jobs()) {
      if (done[static_cast<std::size_t>(job.id - 1)]) continue;
      if (job.arrival_date <= now) {
        // jobs are in id order, so strict < keeps the smaller id on ties
        if (!pick || job.due_date < pick->due_date) pick = &job;
      } else {
        next_arrival = std::min<long long>(next_arrival, job.arrival_date);
      }
    }
    if (!pick) {
      now = next_arrival;
      --placed;
      continue;
    }
    done[static_cast<std::size_t>(pick->id - 1)] = true;
    sequence[static_cast<std::size_t>(placed)] = pick->id;
    now += pick->processing_time;
  }
  return Antigen(sequence);
}

AntigenUniverse generate_universe(const BaseProblem& base, Rng& rng, double probability) {
  std::vector<Antigen> antigens;
  antigens.reserve(kUniverseSize);
  for (int i = 0; i < kUniverseSize; ++i) {
    antigens.push_back(schedule_scenario(mutate_scenario(base, probability, rng)));
  }
  return AntigenUniverse(std::move(antigens));
}

BaseProblem synthetic_base_problem(std::uint64_t seed) {
  Rng rng = make_rng(seed, {kSyntheticStream});
  std::uniform_int_distribution<int> processing(1, 20);
  std::uniform_int_distribution<int> due(30, kMaxArrivalDraw);
  std::vector<Job> jobs;
  for (JobId id = 1; id <= kJobCount; ++id) {
    Job job{id, processing(rng), due(rng), 0};
    job.arrival_date = std::uniform_int_distribution<int>(0, job.latest_arrival())(rng);
    jobs.push_back(job);
  }
  return BaseProblem(std::move(jobs));
}

BaseProblem default_base_problem() { return synthetic_base_problem(kDefaultBaseSeed); }

AntigenUniverse read_universe(std::istream& in) {
  DataLines lines(in);
  std::vector<Antigen> antigens;
  std::string line;
  while (lines.next(line)) {
    const int n = lines.number();
    if (antigens.size() == static_cast<std::size_t>(kUniverseSize))
      throw ParseError(n, "expected 10 antigens, found more");
    auto values = parse_integers(line, n);
    if (values.size() != static_cast<std::size_t>(kJobCount))
      throw ParseError(n, "expected 15 job ids, got " + std::to_string(values.size()));
    std::array<JobId, kJobCount> seq{};
    std::array<bool, kJobCount + 1> seen{};
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto v = values[i];
      if (v < 1 || v > kJobCount) throw ParseError(n, "job id " + std::to_string(v) + " out of range 1..15");
      if (seen[static_cast<std::size_t>(v)]) throw ParseError(n, "duplicate job id " + std::to_string(v));
      seen[static_cast<std::size_t>(v)] = true;
      seq[i] = static_cast<JobId>(v);
    }
    antigens.emplace_back(seq);
  }
  if (antigens.size() != static_cast<std::size_t>(kUniverseSize))
    throw ParseError(0, "expected 10 antigens, got " + std::to_string(antigens.size()));
  return AntigenUniverse(std::move(antigens));
}

void write_universe(std::ostream& out, const AntigenUniverse& universe) {
  for (const auto& antigen : universe.antigens()) {
    auto seq = antigen.sequence();
    for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? " " : "") << seq[i];
    out << '\n';
  }
}

AntigenUniverse load_universe(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  try {
    return read_universe(in);
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

void save_universe(const AntigenUniverse& universe, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_universe(out, universe);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

BaseProblem read_base_problem(std::istream& in) {
  DataLines lines(in);
  std::string line;
  if (!lines.next(line)) throw ParseError(0, "missing 'jobs 15' header");
  {
    std::istringstream is(line);
    std::string word;
    int count = 0;
    std::string rest;
    if (!(is >> word >> count) || word != "jobs" || (is >> rest))
      throw ParseError(lines.number(), "expected header 'jobs 15'");
    if (count != kJobCount) throw ParseError(lines.number(), "expected 15 jobs, header says " + std::to_string(count));
  }
  std::vector<Job> jobs;
  while (lines.next(line)) {
    const int n = lines.number();
    if (jobs.size() == static_cast<std::size_t>(kJobCount)) throw ParseError(n, "more than 15 job lines");
    auto v = parse_integers(line, n);
    if (v.size() != 4) throw ParseError(n, "expected 'id processing_time due_date arrival_date'");
    for (auto x : v) {
      if (x < 0 || x > std::numeric_limits<int>::max()) throw ParseError(n, "value out of range");
    }
    Job job{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])};
    try {
      check_job(job);
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, e.what());
    }
    jobs.push_back(job);
  }
  if (jobs.size() != static_cast<std::size_t>(kJobCount))
    throw ParseError(0, "expected 15 job lines, got " + std::to_string(jobs.size()));
  try {
    return BaseProblem(std::move(jobs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

void write_base_problem(std::ostream& out, const BaseProblem& base) {
  out << "jobs " << kJobCount << '\n';
  for (const auto& job : base.jobs()) {
    out << job.id << ' ' << job.processing_time << ' ' << job.due_date << ' ' << job.arrival_date << '\n';
  }
}

BaseProblem load_base_problem(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  try {
    return read_base_problem(in);
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

void save_base_problem(const BaseProblem& base, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_base_problem(out, base);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace resched
