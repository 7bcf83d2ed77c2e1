#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "resched/schedule_model.hpp"
#include "resched/types.hpp"

namespace resched {

// A 3-job slice of one antigen.
struct Component {
  std::array<JobId, kComponentSize> jobs{};
  int antigen = 0;  // which antigen it was cut from (0..9)
  int slot = 0;     // which library it belongs to (0..4)
};

// Library `index` holds slot `index` of every antigen, in antigen order.
struct GeneLibrary {
  int index = 0;
  std::vector<Component> components;
};

struct LibrarySet {
  std::array<GeneLibrary, kLibraryCount> libraries;
};

enum class PopulationType { A, B, C };

std::string_view to_string(PopulationType type);
PopulationType parse_population_type(std::string_view text);

struct AntibodyPool {
  PopulationType type = PopulationType::A;
  std::vector<Antibody> antibodies;

  std::size_t size() const { return antibodies.size(); }
};

LibrarySet build_libraries(const AntigenUniverse& universe);

// Every order-preserving 5-of-6 selection from c1 ++ c2 without a repeated
// job, enumerated by ascending selection mask.
std::vector<Antibody> combine_components(const Component& first, const Component& second);

// Exhaustive enumeration over all library pairs i<j and component pairs,
// then the duplicate policy of `type`:
//   A keeps everything, B keeps the first of each job sequence,
//   C keeps the first of each job sequence per library pair.
AntibodyPool generate_pool(const LibrarySet& libraries, PopulationType type);

// `size` distinct pool members, uniformly chosen, in random order.
std::vector<Antibody> sample_initial(const AntibodyPool& pool, std::size_t size, Rng& rng);

// Pool dump: "j1 j2 j3 j4 j5 | i j ci cj mask"; the provenance part is
// optional on read.
void write_antibodies(std::ostream& out, std::span<const Antibody> antibodies);
std::vector<Antibody> read_antibodies(std::istream& in);

}  // namespace resched
