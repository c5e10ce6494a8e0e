#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "pragproof/reason/knowledge_base.hpp"
#include "pragproof/reason/proof.hpp"

namespace pragproof::reason {

/// The goal handed to the reasoner as `{antecedent} => {consequent}`.
struct FilterRule {
  std::string source;
  n3::Implication rule;
  n3::Formula source_formula;  // the whole parsed goal document

  /// Takes the single implication of `document`. Throws std::invalid_argument when the
  /// document is not exactly one implication or the filter contains existentials.
  static FilterRule from_document(std::string source, const n3::Document& document);
};

struct Budget {
  std::uint64_t max_steps = 2'000'000;  // rule expansions
  std::chrono::milliseconds max_time{30'000};

  /// Throws std::invalid_argument unless both bounds are positive.
  void validate() const;
};

enum class ProveStatus { Proved, Unprovable, BudgetExceeded };

const char* to_string(ProveStatus status);

struct ProveStats {
  std::uint64_t steps = 0;
  std::uint32_t rounds = 0;  // iterative deepening rounds
  std::uint64_t lemmas = 0;
};

struct ProveResult {
  ProveStatus status = ProveStatus::Unprovable;
  std::optional<Proof> proof;
  std::string message;
  ProveStats stats;
};

struct ProveOptions {
  /// Sources ignored for this query (retired descriptions, stale responses).
  std::set<std::string> excluded_sources;
};

/// Searches for a proof of an instance of the filter's consequent.
///
/// Backward chaining over facts, previously derived lemmas, then rules, with iterative
/// deepening on the number of rule applications. Existentials in rule heads become
/// skolem blank nodes, renamed to `_:skN` in the returned proof.
ProveResult prove(const KnowledgeBase& kb, const FilterRule& filter, const Budget& budget = {},
                  const ProveOptions& options = {});

}  // namespace pragproof::reason
