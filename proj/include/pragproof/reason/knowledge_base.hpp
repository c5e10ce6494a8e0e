#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pragproof/n3/term.hpp"

namespace pragproof::reason {

/// Interned term handle. Non-negative values are constants; negative values are
/// variables local to one rule (`-(i + 1)` for the rule's i-th variable).
using Sym = std::int32_t;

namespace detail {

struct Atom {
  Sym s;
  Sym p;
  Sym o;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Fact {
  Atom atom;
  std::uint32_t source;
  std::uint32_t index;  // position in the source body's atoms
};

struct Rule {
  std::uint32_t source;
  std::uint32_t index;  // position in the source body's implications
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::vector<n3::Term> variables;  // first-occurrence order over antecedent then consequent
  std::vector<bool> existential;    // per variable
  std::vector<int> frontier;        // universal variable indices
};

/// Compiles an implication, mapping each constant through `intern`. Throws
/// std::invalid_argument for unsupported shapes.
Rule compile_rule(const n3::Implication& implication, std::uint32_t source, std::uint32_t index,
                  const std::function<Sym(const n3::Term&)>& intern);

struct AtomRef {
  std::uint32_t owner;  // rule index
  std::uint32_t atom;   // head atom index
};

}  // namespace detail

struct Source {
  std::string iri;
  n3::Document document;
};

/// Sources of facts and rules, compiled into an index for goal-directed matching.
///
/// Sources are append-only; callers exclude sources per query instead of removing them.
class KnowledgeBase {
 public:
  /// Registers a document. Atoms become facts and implications become rules.
  /// Throws std::invalid_argument for duplicate IRIs, facts with universal variables,
  /// or constructs the reasoner does not support (variables nested in lists or formulas).
  void add_source(const std::string& iri, n3::Document document);

  const std::vector<Source>& sources() const { return sources_; }
  std::optional<std::uint32_t> source_index(std::string_view iri) const;
  std::map<std::string, n3::Formula> source_formulas() const;

  Sym intern(const n3::Term& term);
  std::optional<Sym> lookup(const n3::Term& term) const;
  const n3::Term& constant(Sym sym) const { return constants_.at(static_cast<std::size_t>(sym)); }
  std::size_t constant_count() const { return constants_.size(); }

  const std::vector<detail::Fact>& facts() const { return facts_; }
  const std::vector<detail::Rule>& rules() const { return rules_; }
  /// Fact indices by predicate constant, in registration order.
  const std::vector<std::uint32_t>* facts_with_predicate(Sym predicate) const;
  /// Rule head atoms by predicate constant, in registration order.
  const std::vector<detail::AtomRef>* heads_with_predicate(Sym predicate) const;
  /// Rule head atoms whose predicate is a variable.
  const std::vector<detail::AtomRef>& heads_with_variable_predicate() const { return variable_heads_; }
  /// Blank node labels used anywhere in the registered sources.
  const std::set<std::string>& used_labels() const { return used_labels_; }

 private:
  std::vector<Source> sources_;
  std::unordered_map<std::string, std::uint32_t> source_ids_;
  std::vector<n3::Term> constants_;
  std::unordered_map<n3::Term, Sym> constant_ids_;
  std::vector<detail::Fact> facts_;
  std::vector<detail::Rule> rules_;
  std::unordered_map<Sym, std::vector<std::uint32_t>> facts_by_predicate_;
  std::unordered_map<Sym, std::vector<detail::AtomRef>> heads_by_predicate_;
  std::vector<detail::AtomRef> variable_heads_;
  std::set<std::string> used_labels_;
};

}  // namespace pragproof::reason
