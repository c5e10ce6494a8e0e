#pragma once

#include <cstddef>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pragproof/agent/agent.hpp"
#include "pragproof/benchmark/generator.hpp"
#include "pragproof/reason/prover.hpp"

namespace pragproof::benchmark {

/// Description sources in generated order, after the initial state.
reason::KnowledgeBase chain_kb(const GeneratedChain& chain);
reason::FilterRule chain_goal(const GeneratedChain& chain);
agent::CompositionProblem chain_problem(const GeneratedChain& chain);
std::set<std::string> description_names(const GeneratedChain& chain);

struct TimingRecord {
  ChainSpec spec;
  int trial = 0;
  double parse_ms = 0;   // parsing and indexing every document
  double reason_ms = 0;  // the prove call alone
  double total_ms = 0;   // parse_ms + reason_ms
  std::size_t n_pre = 0;
  bool ok = false;  // false when the reasoner gave up or found no proof
  std::string status;
};

/// Times every spec `trials` times after one discarded warm-up trial. Generation is
/// not timed. Trials run sequentially on the calling thread.
std::vector<TimingRecord> run_benchmark(const std::vector<ChainSpec>& grid, int trials, const reason::Budget& budget = {});

struct Summary {
  ChainSpec spec;
  double mean_reason_ms = 0;
  double stddev_reason_ms = 0;
  double mean_total_ms = 0;
};

/// Mean and sample standard deviation per spec, in grid order.
std::vector<Summary> summarize(const std::vector<TimingRecord>& records);

/// Columns n,d,dummies,trial,parse_ms,reason_ms,total_ms,n_pre; failed trials leave n_pre empty.
void write_csv(const std::vector<TimingRecord>& records, std::ostream& out);

/// Reads a grid: either a JSON array of {"n","d","dummies","seed"} objects, or one object
/// whose "n", "d" and "dummies" members may be arrays spanning a lattice.
/// Throws std::invalid_argument on malformed input.
std::vector<ChainSpec> parse_grid(std::string_view json_text);

}  // namespace pragproof::benchmark
