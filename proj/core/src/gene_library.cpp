#include "resched/gene_library.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace resched {

namespace {

constexpr int kCombinedLength = 2 * kComponentSize;

// 5-of-6 selection masks in ascending order.
constexpr std::array<unsigned, kCombinedLength> selection_masks() {
  std::array<unsigned, kCombinedLength> masks{};
  std::size_t n = 0;
  for (unsigned m = 0; m < (1u << kCombinedLength); ++m) {
    if (std::popcount(m) == kAntibodyLength) masks[n++] = m;
  }
  return masks;
}

}  // namespace

std::string_view to_string(PopulationType type) {
  switch (type) {
    case PopulationType::A: return "a";
    case PopulationType::B: return "b";
    case PopulationType::C: return "c";
  }
  return "?";
}

PopulationType parse_population_type(std::string_view text) {
  if (text == "a" || text == "A") return PopulationType::A;
  if (text == "b" || text == "B") return PopulationType::B;
  if (text == "c" || text == "C") return PopulationType::C;
  throw std::invalid_argument("unknown population type '" + std::string(text) + "' (expected a, b or c)");
}

LibrarySet build_libraries(const AntigenUniverse& universe) {
  LibrarySet set;
  for (int slot = 0; slot < kLibraryCount; ++slot) {
    auto& lib = set.libraries[static_cast<std::size_t>(slot)];
    lib.index = slot;
    lib.components.reserve(universe.size());
    for (std::size_t k = 0; k < universe.size(); ++k) {
      Component c;
      c.antigen = static_cast<int>(k);
      c.slot = slot;
      auto seq = universe[k].sequence().subspan(static_cast<std::size_t>(slot * kComponentSize), kComponentSize);
      std::copy(seq.begin(), seq.end(), c.jobs.begin());
      lib.components.push_back(c);
    }
  }
  return set;
}

std::vector<Antibody> combine_components(const Component& first, const Component& second) {
  std::array<JobId, kCombinedLength> joined{};
  std::copy(first.jobs.begin(), first.jobs.end(), joined.begin());
  std::copy(second.jobs.begin(), second.jobs.end(), joined.begin() + kComponentSize);

  std::vector<Antibody> out;
  for (unsigned mask : selection_masks()) {
    Antibody ab;
    std::size_t n = 0;
    for (int k = 0; k < kCombinedLength; ++k) {
      if (mask & (1u << k)) ab.jobs[n++] = joined[static_cast<std::size_t>(k)];
    }
    if (!distinct_jobs(ab.jobs)) continue;
    ab.provenance = Provenance{first.slot, second.slot, first.antigen, second.antigen, mask};
    out.push_back(ab);
  }
  return out;
}

AntibodyPool generate_pool(const LibrarySet& libraries, PopulationType type) {
  using Jobs = std::array<JobId, kAntibodyLength>;
  AntibodyPool pool;
  pool.type = type;
  std::set<Jobs> seen_global;
  std::set<std::tuple<int, int, Jobs>> seen_per_pair;

  for (int i = 0; i < kLibraryCount; ++i) {
    for (int j = i + 1; j < kLibraryCount; ++j) {
      const auto& lib_i = libraries.libraries[static_cast<std::size_t>(i)];
      const auto& lib_j = libraries.libraries[static_cast<std::size_t>(j)];
      for (const auto& ci : lib_i.components) {
        for (const auto& cj : lib_j.components) {
          for (auto& ab : combine_components(ci, cj)) {
            bool keep = true;
            switch (type) {
              case PopulationType::A: break;
              case PopulationType::B: keep = seen_global.insert(ab.jobs).second; break;
              case PopulationType::C: keep = seen_per_pair.emplace(i, j, ab.jobs).second; break;
            }
            if (keep) pool.antibodies.push_back(std::move(ab));
          }
        }
      }
    }
  }
  if (pool.antibodies.empty()) throw std::runtime_error("antibody pool is empty");
  return pool;
}

std::vector<Antibody> sample_initial(const AntibodyPool& pool, std::size_t size, Rng& rng) {
  if (pool.size() < size) {
    throw std::invalid_argument("cannot sample " + std::to_string(size) + " antibodies from a pool of " +
                                std::to_string(pool.size()));
  }
  // partial Fisher-Yates: the first `size` slots end up a uniform ordered sample
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<Antibody> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back(pool.antibodies[idx[i]]);
  return out;
}

void write_antibodies(std::ostream& out, std::span<const Antibody> antibodies) {
  for (const auto& ab : antibodies) {
    for (std::size_t i = 0; i < ab.jobs.size(); ++i) out << (i ? " " : "") << ab.jobs[i];
    if (ab.provenance) {
      const auto& p = *ab.provenance;
      out << " | " << p.first_library << ' ' << p.second_library << ' ' << p.first_component << ' '
          << p.second_component << ' ' << p.mask;
    }
    out << '\n';
  }
}

std::vector<Antibody> read_antibodies(std::istream& in) {
  std::vector<Antibody> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto bar = line.find('|');
    std::istringstream jobs_part(line.substr(0, bar));
    Antibody ab;
    std::size_t count = 0;
    int v = 0;
    while (jobs_part >> v) {
      if (count == ab.jobs.size()) throw ParseError(n, "more than 5 job ids");
      ab.jobs[count++] = v;
    }
    if (!jobs_part.eof() || count != ab.jobs.size()) throw ParseError(n, "expected 5 job ids");
    if (!ab.valid()) throw ParseError(n, "antibody jobs must be 5 distinct ids from 1..15");
    if (bar != std::string::npos) {
      std::istringstream prov(line.substr(bar + 1));
      Provenance p;
      std::string extra;
      if (!(prov >> p.first_library >> p.second_library >> p.first_component >> p.second_component >> p.mask) ||
          (prov >> extra)) {
        throw ParseError(n, "malformed provenance, expected 'i j ci cj mask'");
      }
      ab.provenance = p;
    }
    out.push_back(ab);
  }
  return out;
}

}  // namespace resched
