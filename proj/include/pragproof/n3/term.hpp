#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pragproof::n3 {

class Formula;

enum class TermKind : std::uint8_t {
  Uri,
  Literal,
  ExistentialVar,
  UniversalVar,
  List,
  Graph,
  False,
};

/// A node of the syntax tree: IRI, literal, variable, list, formula expression or `false`.
///
/// Terms are immutable values. Lists and graphs share their payload, so copying is cheap
/// apart from the inline strings.
class Term {
 public:
  Term() = default;

  static Term uri(std::string iri);
  static Term literal(std::string lexical, std::string datatype = {});
  static Term existential(std::string name);
  static Term universal(std::string name);
  static Term list(std::vector<Term> items);
  static Term graph(Formula formula);
  static Term falsum();

  TermKind kind() const { return kind_; }
  /// IRI for Uri, lexical form for Literal, name for variables; empty otherwise.
  const std::string& text() const { return text_; }
  const std::string& datatype() const { return datatype_; }
  std::span<const Term> items() const;
  /// The wrapped formula. Only valid for Graph terms.
  const Formula& formula() const;

  bool is_uri() const { return kind_ == TermKind::Uri; }
  bool is_literal() const { return kind_ == TermKind::Literal; }
  bool is_existential() const { return kind_ == TermKind::ExistentialVar; }
  bool is_universal() const { return kind_ == TermKind::UniversalVar; }
  bool is_variable() const { return is_existential() || is_universal(); }
  bool is_list() const { return kind_ == TermKind::List; }
  bool is_graph() const { return kind_ == TermKind::Graph; }
  bool is_false() const { return kind_ == TermKind::False; }
  bool is_formula_expression() const { return is_graph() || is_false(); }

  /// No variable at any nesting depth.
  bool ground() const;
  /// No universal variable at any nesting depth.
  bool universal_free() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  std::size_t hash() const;

 private:
  TermKind kind_ = TermKind::Uri;
  std::string text_;
  std::string datatype_;
  std::shared_ptr<const std::vector<Term>> items_;
  std::shared_ptr<const Formula> graph_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple& a, const Triple& b);
};

/// `antecedent => consequent.`; both sides are Graph or False terms.
struct Implication {
  Term antecedent;
  Term consequent;

  friend bool operator==(const Implication&, const Implication&) = default;
  friend std::strong_ordering operator<=>(const Implication& a, const Implication& b);
};

/// A flattened conjunction of atomic triples and implications.
///
/// Equality treats both member lists as multisets; the stored order is kept for
/// serialization.
class Formula {
 public:
  std::vector<Triple> atoms;
  std::vector<Implication> implications;

  Formula() = default;
  Formula(std::vector<Triple> atoms_in, std::vector<Implication> implications_in = {})
      : atoms(std::move(atoms_in)), implications(std::move(implications_in)) {}

  bool empty() const { return atoms.empty() && implications.empty(); }
  std::size_t size() const { return atoms.size() + implications.size(); }

  /// Appends every member of `other` (conjunction).
  void append(const Formula& other);

  /// Multiset containment: every member of `part` occurs here at least as often.
  bool contains(const Formula& part) const;
  bool contains(const Triple& atom) const;

  bool ground() const;
  bool universal_free() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

  std::size_t hash() const;
};

struct Document {
  std::map<std::string, std::string> prefixes;
  Formula body;
  std::optional<std::string> base;
};

namespace vocab {
inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr const char* kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr const char* kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr const char* kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr const char* kXsdBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr const char* kHttp = "http://www.w3.org/2011/http#";
inline constexpr const char* kReason = "http://www.w3.org/2000/10/swap/reason#";
inline constexpr const char* kRei = "http://www.w3.org/2004/06/rei#";
}  // namespace vocab

}  // namespace pragproof::n3

template <>
struct std::hash<pragproof::n3::Term> {
  std::size_t operator()(const pragproof::n3::Term& t) const noexcept { return t.hash(); }
};

template <>
struct std::hash<pragproof::n3::Triple> {
  std::size_t operator()(const pragproof::n3::Triple& t) const noexcept {
    std::size_t h = t.subject.hash();
    h = h * 1000003u ^ t.predicate.hash();
    return h * 1000003u ^ t.object.hash();
  }
};
