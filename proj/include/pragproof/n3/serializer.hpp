#pragma once

#include <map>
#include <string>

#include "pragproof/n3/term.hpp"

namespace pragproof::n3 {

struct SerializeOptions {
  /// One triple per statement, no `;` grouping and no `a` shorthand.
  bool expand = false;
};

using PrefixMap = std::map<std::string, std::string>;

std::string serialize(const Document& doc, const SerializeOptions& options = {});

/// Renders a single term, compacting IRIs through `prefixes` where possible.
std::string serialize_term(const Term& term, const PrefixMap& prefixes = {});

/// Renders the members of a formula as statements, one per line, at the given indent.
std::string serialize_statements(const Formula& formula, const PrefixMap& prefixes, int indent = 0,
                                 const SerializeOptions& options = {});

/// Renders a formula as a braced graph term, inline when it has at most one member.
std::string serialize_graph(const Formula& formula, const PrefixMap& prefixes, int indent = 0,
                            const SerializeOptions& options = {});

}  // namespace pragproof::n3
