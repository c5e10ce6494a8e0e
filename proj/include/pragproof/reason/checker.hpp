#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pragproof/reason/proof.hpp"

namespace pragproof::reason {

struct Violation {
  std::optional<StepRef> step;  // empty for whole-proof problems
  std::string condition;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& violation);

/// Checks every step of `proof` independently of how it was produced.
///
/// Parsing steps must give their source's formula, Extractions a part of their
/// premise, Proof and Conjunction steps the union of their components, and Inferences
/// the instantiated consequent of their rule with fresh blank nodes for head
/// existentials. Structural defects (dangling references, cycles, a missing Proof
/// root) are reported before and instead of the per-step checks. An empty result means valid.
std::vector<Violation> check_proof(const Proof& proof, const std::map<std::string, n3::Formula>& sources);

}  // namespace pragproof::reason
