#include "resched/types.hpp"

#include <algorithm>
#include <bitset>
#include <sstream>
#include <vector>

namespace resched {

namespace {

std::vector<std::uint32_t> seed_words(std::uint64_t seed, std::initializer_list<std::uint32_t> stream) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  words.insert(words.end(), stream.begin(), stream.end());
  return words;
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint32_t> stream) {
  auto words = seed_words(seed, stream);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint32_t> stream) {
  auto words = seed_words(seed, stream);
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

bool distinct_jobs(std::span<const JobId> jobs) {
  std::bitset<kJobCount + 1> seen;
  for (JobId id : jobs) {
    if (!valid_job(id) || seen.test(static_cast<std::size_t>(id))) return false;
    seen.set(static_cast<std::size_t>(id));
  }
  return true;
}

bool Antibody::contains(JobId id) const {
  return std::find(jobs.begin(), jobs.end(), id) != jobs.end();
}

std::string to_string(const Antibody& ab) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < ab.jobs.size(); ++i) os << (i ? "," : "") << ab.jobs[i];
  os << ']';
  return os.str();
}

}  // namespace resched
