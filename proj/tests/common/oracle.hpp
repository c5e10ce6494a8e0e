#pragma once

// Random existential-free instances and a brute-force forward-closure oracle,
// shared by the unit tests and the acceptance binary.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pragproof/n3/term.hpp"

namespace oracle {

using pragproof::n3::Formula;
using pragproof::n3::Implication;
using pragproof::n3::Term;
using pragproof::n3::Triple;

struct Instance {
  std::vector<Triple> facts;
  std::vector<Implication> rules;
  Triple goal;
};

inline Term constant(int i) { return Term::uri("http://example.org/o#c" + std::to_string(i)); }
inline Term predicate(int i) { return Term::uri("http://example.org/o#p" + std::to_string(i)); }

inline Instance random_instance(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  const char* var_names[] = {"x", "y", "z"};

  Instance inst;
  int fact_count = pick(9);
  for (int i = 0; i < fact_count; ++i) inst.facts.push_back({constant(pick(5)), predicate(pick(3)), constant(pick(5))});

  int rule_count = pick(5);
  for (int r = 0; r < rule_count; ++r) {
    std::vector<Term> body_vars;
    auto body_term = [&] {
      if (chance(0.6)) {
        Term v = Term::universal(var_names[pick(3)]);
        body_vars.push_back(v);
        return v;
      }
      return constant(pick(5));
    };
    std::vector<Triple> body;
    int body_size = 1 + pick(2);
    for (int a = 0; a < body_size; ++a) {
      Term s = body_term();
      Term p = chance(0.1) ? body_term() : predicate(pick(3));
      Term o = body_term();
      body.push_back({s, p, o});
    }
    auto head_term = [&] { return !body_vars.empty() && chance(0.7) ? body_vars[pick(static_cast<int>(body_vars.size()))] : constant(pick(5)); };
    std::vector<Triple> head;
    int head_size = 1 + pick(2);
    for (int a = 0; a < head_size; ++a) {
      Term s = head_term();
      Term p = predicate(pick(3));
      Term o = head_term();
      head.push_back({s, p, o});
    }
    inst.rules.push_back({Term::graph(Formula(body)), Term::graph(Formula(head))});
  }

  auto goal_term = [&](const char* name) { return chance(0.4) ? Term::universal(name) : constant(pick(5)); };
  Term gs = goal_term("g0");
  Term go = chance(0.2) ? gs : goal_term("g1");
  inst.goal = {gs, predicate(pick(3)), go};
  return inst;
}

using Bindings = std::map<Term, Term>;

inline bool match(const Term& pattern, const Term& value, Bindings& b) {
  if (!pattern.is_universal()) return pattern == value;
  auto [it, inserted] = b.emplace(pattern, value);
  return inserted || it->second == value;
}

inline bool match(const Triple& pattern, const Triple& fact, Bindings& b) {
  return match(pattern.subject, fact.subject, b) && match(pattern.predicate, fact.predicate, b) &&
         match(pattern.object, fact.object, b);
}

inline Term substitute(const Term& t, const Bindings& b) {
  auto it = b.find(t);
  return it == b.end() ? t : it->second;
}

inline void all_matches(const std::vector<Triple>& body, std::size_t i, const std::set<Triple>& facts, Bindings& b,
                        std::vector<Bindings>& out) {
  if (i == body.size()) {
    out.push_back(b);
    return;
  }
  for (const Triple& f : facts) {
    Bindings saved = b;
    if (match(body[i], f, b)) all_matches(body, i + 1, facts, b, out);
    b = std::move(saved);
  }
}

/// Naive fixpoint of the rules over the facts.
inline std::set<Triple> closure(const Instance& inst) {
  std::set<Triple> facts(inst.facts.begin(), inst.facts.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (const Implication& rule : inst.rules) {
      std::vector<Bindings> matches;
      Bindings b;
      all_matches(rule.antecedent.formula().atoms, 0, facts, b, matches);
      for (const Bindings& m : matches) {
        for (const Triple& h : rule.consequent.formula().atoms) {
          Triple t{substitute(h.subject, m), substitute(h.predicate, m), substitute(h.object, m)};
          changed |= facts.insert(t).second;
        }
      }
    }
  }
  return facts;
}

/// Ground instances of the goal pattern in the closure.
inline std::set<Triple> goal_instances(const Instance& inst) {
  std::set<Triple> out;
  for (const Triple& f : closure(inst)) {
    Bindings b;
    if (match(inst.goal, f, b)) out.insert(f);
  }
  return out;
}

}  // namespace oracle
