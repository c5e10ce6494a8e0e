#include "pragproof/n3/term.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pragproof::n3 {

namespace {

const std::vector<Term> kNoItems;

template <typename T>
std::vector<T> sorted_copy(const std::vector<T>& v) {
  std::vector<T> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

template <typename T>
std::strong_ordering compare_sequences(const std::vector<T>& a, const std::vector<T>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Term Term::uri(std::string iri) {
  Term t;
  t.kind_ = TermKind::Uri;
  t.text_ = std::move(iri);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype) {
  Term t;
  t.kind_ = TermKind::Literal;
  t.text_ = std::move(lexical);
  t.datatype_ = std::move(datatype);
  return t;
}

Term Term::existential(std::string name) {
  if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  Term t;
  t.kind_ = TermKind::ExistentialVar;
  t.text_ = std::move(name);
  return t;
}

Term Term::universal(std::string name) {
  if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  Term t;
  t.kind_ = TermKind::UniversalVar;
  t.text_ = std::move(name);
  return t;
}

Term Term::list(std::vector<Term> items) {
  Term t;
  t.kind_ = TermKind::List;
  t.items_ = std::make_shared<const std::vector<Term>>(std::move(items));
  return t;
}

Term Term::graph(Formula formula) {
  Term t;
  t.kind_ = TermKind::Graph;
  t.graph_ = std::make_shared<const Formula>(std::move(formula));
  return t;
}

Term Term::falsum() {
  Term t;
  t.kind_ = TermKind::False;
  return t;
}

std::span<const Term> Term::items() const {
  if (!items_) return kNoItems;
  return *items_;
}

const Formula& Term::formula() const {
  if (!graph_) throw std::logic_error("formula() on a term that is not a graph");
  return *graph_;
}

bool Term::ground() const {
  switch (kind_) {
    case TermKind::ExistentialVar:
    case TermKind::UniversalVar:
      return false;
    case TermKind::List:
      return std::all_of(items_->begin(), items_->end(), [](const Term& t) { return t.ground(); });
    case TermKind::Graph:
      return graph_->ground();
    default:
      return true;
  }
}

bool Term::universal_free() const {
  switch (kind_) {
    case TermKind::UniversalVar:
      return false;
    case TermKind::List:
      return std::all_of(items_->begin(), items_->end(), [](const Term& t) { return t.universal_free(); });
    case TermKind::Graph:
      return graph_->universal_free();
    default:
      return true;
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case TermKind::List:
      return a.items_ == b.items_ || *a.items_ == *b.items_;
    case TermKind::Graph:
      return a.graph_ == b.graph_ || *a.graph_ == *b.graph_;
    case TermKind::False:
      return true;
    default:
      return a.text_ == b.text_ && a.datatype_ == b.datatype_;
  }
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  switch (a.kind_) {
    case TermKind::List:
      return compare_sequences(*a.items_, *b.items_);
    case TermKind::Graph:
      return *a.graph_ <=> *b.graph_;
    case TermKind::False:
      return std::strong_ordering::equal;
    default:
      if (auto c = a.text_ <=> b.text_; c != 0) return c;
      return a.datatype_ <=> b.datatype_;
  }
}

std::size_t Term::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_);
  switch (kind_) {
    case TermKind::List:
      for (const Term& t : *items_) h = mix(h, t.hash());
      return h;
    case TermKind::Graph:
      return mix(h, graph_->hash());
    case TermKind::False:
      return h;
    default:
      h = mix(h, std::hash<std::string>{}(text_));
      if (!datatype_.empty()) h = mix(h, std::hash<std::string>{}(datatype_));
      return h;
  }
}

std::strong_ordering operator<=>(const Triple& a, const Triple& b) {
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return a.object <=> b.object;
}

std::strong_ordering operator<=>(const Implication& a, const Implication& b) {
  if (auto c = a.antecedent <=> b.antecedent; c != 0) return c;
  return a.consequent <=> b.consequent;
}

void Formula::append(const Formula& other) {
  atoms.insert(atoms.end(), other.atoms.begin(), other.atoms.end());
  implications.insert(implications.end(), other.implications.begin(), other.implications.end());
}

namespace {

template <typename T>
bool multiset_includes(const std::vector<T>& whole, const std::vector<T>& part) {
  auto w = sorted_copy(whole);
  auto p = sorted_copy(part);
  return std::includes(w.begin(), w.end(), p.begin(), p.end());
}

}  // namespace

bool Formula::contains(const Formula& part) const {
  return multiset_includes(atoms, part.atoms) && multiset_includes(implications, part.implications);
}

bool Formula::contains(const Triple& atom) const {
  return std::find(atoms.begin(), atoms.end(), atom) != atoms.end();
}

bool Formula::ground() const {
  for (const Triple& t : atoms)
    if (!t.subject.ground() || !t.predicate.ground() || !t.object.ground()) return false;
  for (const Implication& i : implications)
    if (!i.antecedent.ground() || !i.consequent.ground()) return false;
  return true;
}

bool Formula::universal_free() const {
  for (const Triple& t : atoms)
    if (!t.subject.universal_free() || !t.predicate.universal_free() || !t.object.universal_free()) return false;
  for (const Implication& i : implications)
    if (!i.antecedent.universal_free() || !i.consequent.universal_free()) return false;
  return true;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.atoms.size() != b.atoms.size() || a.implications.size() != b.implications.size()) return false;
  if (a.atoms == b.atoms && a.implications == b.implications) return true;
  return sorted_copy(a.atoms) == sorted_copy(b.atoms) &&
         sorted_copy(a.implications) == sorted_copy(b.implications);
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (auto c = compare_sequences(sorted_copy(a.atoms), sorted_copy(b.atoms)); c != 0) return c;
  return compare_sequences(sorted_copy(a.implications), sorted_copy(b.implications));
}

std::size_t Formula::hash() const {
  // Order-independent so that it agrees with multiset equality.
  std::size_t h = 0;
  for (const Triple& t : atoms) h += std::hash<Triple>{}(t);
  for (const Implication& i : implications) h += mix(i.antecedent.hash(), i.consequent.hash()) * 31u;
  return h;
}

}  // namespace pragproof::n3
