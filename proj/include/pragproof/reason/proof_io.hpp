#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pragproof/n3/serializer.hpp"
#include "pragproof/reason/proof.hpp"

namespace pragproof::reason {

struct ProofFormat {
  /// Omit Extractions taken from Inference results (see elide_extractions).
  bool elide_extractions = false;
  /// Prefixes used to compact IRIs inside `r:gives` formulas; r: and n3: are always added.
  n3::PrefixMap prefixes;
};

/// Local names used by serialize_proof: "proof" for the root, "lemmaK" for other
/// steps, empty for Parsing steps.
std::vector<std::string> step_names(const Proof& proof);

/// Renders a proof in the r: vocabulary. The root is `<#proof>`, the other steps
/// `<#lemmaK>`; Parsing steps are written inline as `[ a r:Parsing; r:source <iri> ]`.
/// Bindings name variables `var#xK` by their position in the rule.
std::string serialize_proof(const Proof& proof, const ProofFormat& format = {});

/// Reads a proof written in the r: vocabulary, including terse proofs whose
/// Extractions carry no `r:gives`. Parsing steps take their formula from `sources`;
/// an Extraction without `r:gives` takes its premise's formula.
/// Throws n3::ParseError on syntax errors and std::invalid_argument on malformed structure.
Proof parse_proof(std::string_view text, const std::map<std::string, n3::Formula>& sources);

}  // namespace pragproof::reason
