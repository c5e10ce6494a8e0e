#pragma once

#include <map>
#include <set>
#include <vector>

#include "pragproof/n3/term.hpp"

namespace pragproof::n3 {

/// Finite map from variables to terms. Identity pairs are rejected.
class Substitution {
 public:
  Substitution() = default;

  /// Throws std::invalid_argument if `variable` is not a variable or maps to itself.
  void bind(const Term& variable, const Term& value);
  const Term* find(const Term& variable) const;

  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }
  const std::map<Term, Term>& pairs() const { return pairs_; }

 private:
  std::map<Term, Term> pairs_;
};

enum class ApplyMode { Component, Total };

struct Classification {
  bool ground = false;
  bool universal_free = false;
  bool simple = false;
};

/// comp^level(f); level 1 is the set of direct components, with lists flattened.
std::set<Term> components(const Formula& f, int level);

Term apply_substitution(const Term& t, const Substitution& s, ApplyMode mode);
Triple apply_substitution(const Triple& t, const Substitution& s, ApplyMode mode);
Formula apply_substitution(const Formula& f, const Substitution& s, ApplyMode mode);

Classification classify(const Formula& f);

/// Variables of `f` in order of first occurrence, at any depth.
std::vector<Term> variables_in_order(const Formula& f);
/// Variables of an implication in first-occurrence order over antecedent, then consequent.
std::vector<Term> variables_in_order(const Implication& imp);

/// Every variable occurring anywhere in `f`.
std::set<Term> variables(const Formula& f);

/// Equal up to a bijective, kind-preserving renaming of variables.
bool isomorphic(const Formula& a, const Formula& b);

}  // namespace pragproof::n3
