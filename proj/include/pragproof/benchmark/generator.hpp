#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pragproof/n3/term.hpp"

namespace pragproof::benchmark {

inline constexpr const char* kBenchNs = "http://example.org/bench#";

struct ChainSpec {
  int n = 2;        // composition length
  int d = 1;        // dependencies per description
  int dummies = 0;  // descriptions that compose with each other but never reach the goal
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless n >= 2, d >= 1 and dummies >= 0.
  void validate() const;
};

struct NamedDocument {
  std::string name;  // source IRI, also the file stem
  std::string text;
};

struct GeneratedChain {
  ChainSpec spec;
  std::vector<NamedDocument> descriptions;  // chain and dummies, shuffled by the seed
  NamedDocument initial_state;
  NamedDocument goal;
  std::vector<std::string> plan;  // chain description names in execution order
};

/// Description i turns d `rel{i}` links into a GET on the first target and promises
/// d `rel{i+1}` links from the targets. Only the first description's request is ground
/// in a pre-proof; each response grounds the next one.
GeneratedChain generate_chain(const ChainSpec& spec);

/// Resource URI of link end `j` (1-based) at chain level `i`.
std::string chain_resource(int level, int j);

/// `rel{i}` links served by a GET on any resource of level i - 1, as N3.
std::string chain_links(int n, int d, int level);

}  // namespace pragproof::benchmark
