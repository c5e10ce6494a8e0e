#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pragproof/n3/term.hpp"

namespace pragproof::reason {

enum class StepKind { Proof, Parsing, Extraction, Conjunction, Inference };

const char* to_string(StepKind kind);

/// Index of a step inside Proof::steps.
using StepRef = std::size_t;

struct Binding {
  n3::Term variable;
  n3::Term value;

  friend bool operator==(const Binding&, const Binding&) = default;
};

/// One lemma of a proof. Only the fields belonging to `kind` are populated.
struct ProofStep {
  StepKind kind = StepKind::Parsing;
  n3::Formula gives;
  std::optional<std::string> source;   // Parsing
  std::optional<StepRef> because;      // Extraction
  std::vector<StepRef> components;     // Proof, Conjunction
  std::optional<StepRef> rule;         // Inference
  std::vector<StepRef> evidence;       // Inference, in antecedent order
  std::vector<Binding> bindings;       // Inference

  friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

struct Proof {
  StepRef root = 0;
  std::vector<ProofStep> steps;
  std::size_t skolem_count = 0;

  const ProofStep& at(StepRef ref) const { return steps.at(ref); }
  const n3::Formula& conclusion() const { return steps.at(root).gives; }

  friend bool operator==(const Proof&, const Proof&) = default;
};

/// Distinct Inference steps whose rule traces back, through Extractions, to a Parsing
/// of one of `rule_sources`.
std::size_t count_rule_applications(const Proof& proof, const std::set<std::string>& rule_sources);

/// Source IRI a step's rule originates from, following Extraction links.
std::optional<std::string> rule_source(const Proof& proof, StepRef inference);

/// Inference steps in topological order: every step appears after the steps it depends on.
std::vector<StepRef> inferences_in_dependency_order(const Proof& proof);

/// Drops Extractions taken from Inference results and points their users at the
/// Inference directly, as terser reasoners print proofs. The result stays checkable.
Proof elide_extractions(const Proof& proof);

}  // namespace pragproof::reason
