#include "pragproof/n3/algebra.hpp"

#include <functional>
#include <stdexcept>

namespace pragproof::n3 {

void Substitution::bind(const Term& variable, const Term& value) {
  if (!variable.is_variable()) throw std::invalid_argument("substitution key must be a variable");
  if (variable == value) throw std::invalid_argument("substitution may not map a variable to itself");
  pairs_[variable] = value;
}

const Term* Substitution::find(const Term& variable) const {
  auto it = pairs_.find(variable);
  return it == pairs_.end() ? nullptr : &it->second;
}

namespace {

void flatten_into(const Term& t, std::set<Term>& out) {
  if (t.is_list()) {
    for (const Term& item : t.items()) flatten_into(item, out);
  } else {
    out.insert(t);
  }
}

std::set<Term> direct_components(const Formula& f) {
  std::set<Term> out;
  for (const Triple& t : f.atoms) {
    flatten_into(t.subject, out);
    flatten_into(t.predicate, out);
    flatten_into(t.object, out);
  }
  for (const Implication& i : f.implications) {
    out.insert(i.antecedent);
    out.insert(i.consequent);
  }
  return out;
}

Term apply_term(const Term& t, const Substitution& s, ApplyMode mode) {
  switch (t.kind()) {
    case TermKind::ExistentialVar:
    case TermKind::UniversalVar: {
      const Term* v = s.find(t);
      return v ? *v : t;
    }
    case TermKind::List: {
      std::vector<Term> items;
      items.reserve(t.items().size());
      for (const Term& item : t.items()) items.push_back(apply_term(item, s, mode));
      return Term::list(std::move(items));
    }
    case TermKind::Graph:
      if (mode == ApplyMode::Component) return t;
      return Term::graph(apply_substitution(t.formula(), s, mode));
    default:
      return t;
  }
}

void collect_variables(const Term& t, std::vector<Term>& order, std::set<Term>& seen);

void collect_variables(const Formula& f, std::vector<Term>& order, std::set<Term>& seen) {
  for (const Triple& t : f.atoms) {
    collect_variables(t.subject, order, seen);
    collect_variables(t.predicate, order, seen);
    collect_variables(t.object, order, seen);
  }
  for (const Implication& i : f.implications) {
    collect_variables(i.antecedent, order, seen);
    collect_variables(i.consequent, order, seen);
  }
}

void collect_variables(const Term& t, std::vector<Term>& order, std::set<Term>& seen) {
  if (t.is_variable()) {
    if (seen.insert(t).second) order.push_back(t);
  } else if (t.is_list()) {
    for (const Term& item : t.items()) collect_variables(item, order, seen);
  } else if (t.is_graph()) {
    collect_variables(t.formula(), order, seen);
  }
}

// Bijection between variables of the left and right formula.
struct Renaming {
  std::map<Term, Term> forward;
  std::map<Term, Term> backward;
};

using Continuation = std::function<bool(Renaming&)>;

bool match_formula(const Formula& a, const Formula& b, Renaming& r, const Continuation& k);

bool match_term(const Term& a, const Term& b, Renaming& r, const Continuation& k) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::ExistentialVar:
    case TermKind::UniversalVar: {
      auto f = r.forward.find(a);
      auto g = r.backward.find(b);
      if (f != r.forward.end() || g != r.backward.end()) {
        if (f == r.forward.end() || g == r.backward.end() || !(f->second == b)) return false;
        return k(r);
      }
      Renaming extended = r;
      extended.forward.emplace(a, b);
      extended.backward.emplace(b, a);
      return k(extended);
    }
    case TermKind::List: {
      auto ai = a.items();
      auto bi = b.items();
      if (ai.size() != bi.size()) return false;
      std::function<bool(std::size_t, Renaming&)> step = [&](std::size_t i, Renaming& cur) -> bool {
        if (i == ai.size()) return k(cur);
        return match_term(ai[i], bi[i], cur, [&](Renaming& next) { return step(i + 1, next); });
      };
      return step(0, r);
    }
    case TermKind::Graph:
      return match_formula(a.formula(), b.formula(), r, k);
    default:
      return a == b && k(r);
  }
}

bool match_triple(const Triple& a, const Triple& b, Renaming& r, const Continuation& k) {
  return match_term(a.subject, b.subject, r, [&](Renaming& r1) {
    return match_term(a.predicate, b.predicate, r1, [&](Renaming& r2) { return match_term(a.object, b.object, r2, k); });
  });
}

bool match_formula(const Formula& a, const Formula& b, Renaming& r, const Continuation& k) {
  if (a.atoms.size() != b.atoms.size() || a.implications.size() != b.implications.size()) return false;
  std::vector<bool> used_atoms(b.atoms.size(), false);
  std::vector<bool> used_imps(b.implications.size(), false);
  std::function<bool(std::size_t, Renaming&)> imp_step;
  std::function<bool(std::size_t, Renaming&)> atom_step = [&](std::size_t i, Renaming& cur) -> bool {
    if (i == a.atoms.size()) return imp_step(0, cur);
    for (std::size_t j = 0; j < b.atoms.size(); ++j) {
      if (used_atoms[j]) continue;
      used_atoms[j] = true;
      bool ok = match_triple(a.atoms[i], b.atoms[j], cur, [&](Renaming& next) { return atom_step(i + 1, next); });
      used_atoms[j] = false;
      if (ok) return true;
    }
    return false;
  };
  imp_step = [&](std::size_t i, Renaming& cur) -> bool {
    if (i == a.implications.size()) return k(cur);
    for (std::size_t j = 0; j < b.implications.size(); ++j) {
      if (used_imps[j]) continue;
      used_imps[j] = true;
      const Implication& x = a.implications[i];
      const Implication& y = b.implications[j];
      bool ok = match_term(x.antecedent, y.antecedent, cur, [&](Renaming& r1) {
        return match_term(x.consequent, y.consequent, r1, [&](Renaming& r2) { return imp_step(i + 1, r2); });
      });
      used_imps[j] = false;
      if (ok) return true;
    }
    return false;
  };
  return atom_step(0, r);
}

}  // namespace

std::set<Term> components(const Formula& f, int level) {
  if (level < 1) throw std::invalid_argument("component level must be positive");
  std::set<Term> current = direct_components(f);
  for (int n = 2; n <= level; ++n) {
    std::set<Term> next;
    for (const Term& t : current) {
      if (!t.is_graph()) continue;
      std::set<Term> inner = direct_components(t.formula());
      next.insert(inner.begin(), inner.end());
    }
    current = std::move(next);
    if (current.empty()) break;
  }
  return current;
}

Term apply_substitution(const Term& t, const Substitution& s, ApplyMode mode) {
  if (s.empty()) return t;
  return apply_term(t, s, mode);
}

Triple apply_substitution(const Triple& t, const Substitution& s, ApplyMode mode) {
  return {apply_substitution(t.subject, s, mode), apply_substitution(t.predicate, s, mode),
          apply_substitution(t.object, s, mode)};
}

Formula apply_substitution(const Formula& f, const Substitution& s, ApplyMode mode) {
  if (s.empty()) return f;
  Formula out;
  out.atoms.reserve(f.atoms.size());
  for (const Triple& t : f.atoms) out.atoms.push_back(apply_substitution(t, s, mode));
  for (const Implication& i : f.implications) {
    out.implications.push_back({apply_term(i.antecedent, s, mode), apply_term(i.consequent, s, mode)});
  }
  return out;
}

Classification classify(const Formula& f) {
  Classification c;
  c.ground = f.ground();
  c.universal_free = f.universal_free();
  c.simple = components(f, 3).empty();
  return c;
}

std::vector<Term> variables_in_order(const Formula& f) {
  std::vector<Term> order;
  std::set<Term> seen;
  collect_variables(f, order, seen);
  return order;
}

std::vector<Term> variables_in_order(const Implication& imp) {
  std::vector<Term> order;
  std::set<Term> seen;
  collect_variables(imp.antecedent, order, seen);
  collect_variables(imp.consequent, order, seen);
  return order;
}

std::set<Term> variables(const Formula& f) {
  auto order = variables_in_order(f);
  return {order.begin(), order.end()};
}

bool isomorphic(const Formula& a, const Formula& b) {
  Renaming r;
  return match_formula(a, b, r, [](Renaming&) { return true; });
}

}  // namespace pragproof::n3
