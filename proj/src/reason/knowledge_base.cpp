#include "pragproof/reason/knowledge_base.hpp"

#include <stdexcept>

#include "pragproof/n3/algebra.hpp"

namespace pragproof::reason {

namespace detail {

namespace {

struct RuleCompiler {
  const std::function<Sym(const n3::Term&)>& intern;
  std::map<n3::Term, int> locals;

  Sym symbol(const n3::Term& t) const {
    if (t.is_variable()) return -(locals.at(t) + 1);
    if (!t.ground() && (t.is_list() || t.is_graph())) {
      throw std::invalid_argument("variables nested inside lists or formulas are not supported in rules");
    }
    return intern(t);
  }

  std::vector<Atom> atoms(const n3::Formula& f) const {
    if (!f.implications.empty()) throw std::invalid_argument("nested implications are not supported in rules");
    std::vector<Atom> out;
    out.reserve(f.atoms.size());
    for (const n3::Triple& t : f.atoms) out.push_back({symbol(t.subject), symbol(t.predicate), symbol(t.object)});
    return out;
  }
};

}  // namespace

Rule compile_rule(const n3::Implication& implication, std::uint32_t source, std::uint32_t index,
                  const std::function<Sym(const n3::Term&)>& intern) {
  if (!implication.antecedent.is_graph()) throw std::invalid_argument("rule antecedent must be a formula");
  Rule rule;
  rule.source = source;
  rule.index = index;
  rule.variables = n3::variables_in_order(implication);
  RuleCompiler compiler{intern, {}};
  for (std::size_t i = 0; i < rule.variables.size(); ++i) {
    compiler.locals.emplace(rule.variables[i], static_cast<int>(i));
  }
  const n3::Formula& body = implication.antecedent.formula();
  std::set<n3::Term> body_vars = n3::variables(body);
  for (const n3::Term& v : body_vars) {
    if (v.is_existential()) throw std::invalid_argument("existential variable _:" + v.text() + " in a rule antecedent");
  }
  rule.body = compiler.atoms(body);
  if (implication.consequent.is_graph()) {
    rule.head = compiler.atoms(implication.consequent.formula());
  }
  for (std::size_t i = 0; i < rule.variables.size(); ++i) {
    const n3::Term& v = rule.variables[i];
    rule.existential.push_back(v.is_existential());
    if (v.is_universal()) {
      if (!body_vars.count(v)) throw std::invalid_argument("universal ?" + v.text() + " occurs only in a rule head");
      rule.frontier.push_back(static_cast<int>(i));
    }
  }
  return rule;
}

}  // namespace detail

namespace {

void collect_labels(const n3::Formula& f, std::set<std::string>& out) {
  for (const n3::Term& v : n3::variables(f))
    if (v.is_existential()) out.insert(v.text());
}

}  // namespace

void KnowledgeBase::add_source(const std::string& iri, n3::Document document) {
  if (source_ids_.count(iri)) throw std::invalid_argument("duplicate source " + iri);
  auto source = static_cast<std::uint32_t>(sources_.size());
  const n3::Formula& body = document.body;
  std::vector<detail::Fact> new_facts;
  std::vector<detail::Rule> new_rules;
  auto intern_fn = [this](const n3::Term& t) { return intern(t); };
  for (std::size_t i = 0; i < body.atoms.size(); ++i) {
    const n3::Triple& t = body.atoms[i];
    if (!t.subject.universal_free() || !t.predicate.universal_free() || !t.object.universal_free()) {
      throw std::invalid_argument("fact with a universal variable in source " + iri);
    }
    new_facts.push_back({{intern(t.subject), intern(t.predicate), intern(t.object)}, source, static_cast<std::uint32_t>(i)});
  }
  for (std::size_t i = 0; i < body.implications.size(); ++i) {
    new_rules.push_back(detail::compile_rule(body.implications[i], source, static_cast<std::uint32_t>(i), intern_fn));
  }
  for (detail::Fact& f : new_facts) {
    facts_by_predicate_[f.atom.p].push_back(static_cast<std::uint32_t>(facts_.size()));
    facts_.push_back(f);
  }
  for (detail::Rule& r : new_rules) {
    auto rule_id = static_cast<std::uint32_t>(rules_.size());
    for (std::size_t h = 0; h < r.head.size(); ++h) {
      detail::AtomRef ref{rule_id, static_cast<std::uint32_t>(h)};
      if (r.head[h].p < 0) {
        variable_heads_.push_back(ref);
      } else {
        heads_by_predicate_[r.head[h].p].push_back(ref);
      }
    }
    rules_.push_back(std::move(r));
  }
  collect_labels(body, used_labels_);
  source_ids_.emplace(iri, source);
  sources_.push_back({iri, std::move(document)});
}

std::optional<std::uint32_t> KnowledgeBase::source_index(std::string_view iri) const {
  auto it = source_ids_.find(std::string(iri));
  if (it == source_ids_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, n3::Formula> KnowledgeBase::source_formulas() const {
  std::map<std::string, n3::Formula> out;
  for (const Source& s : sources_) out.emplace(s.iri, s.document.body);
  return out;
}

Sym KnowledgeBase::intern(const n3::Term& term) {
  auto [it, inserted] = constant_ids_.try_emplace(term, static_cast<Sym>(constants_.size()));
  if (inserted) constants_.push_back(term);
  return it->second;
}

std::optional<Sym> KnowledgeBase::lookup(const n3::Term& term) const {
  auto it = constant_ids_.find(term);
  if (it == constant_ids_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::uint32_t>* KnowledgeBase::facts_with_predicate(Sym predicate) const {
  auto it = facts_by_predicate_.find(predicate);
  return it == facts_by_predicate_.end() ? nullptr : &it->second;
}

const std::vector<detail::AtomRef>* KnowledgeBase::heads_with_predicate(Sym predicate) const {
  auto it = heads_by_predicate_.find(predicate);
  return it == heads_by_predicate_.end() ? nullptr : &it->second;
}

}  // namespace pragproof::reason
