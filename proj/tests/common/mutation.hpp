#pragma once

// Single-field mutations of a valid proof. Mutations that leave the proof
// semantically unchanged (same value, swapping evidence with equal formulas,
// redirecting to a step with an equal formula) are not generated.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "pragproof/reason/proof.hpp"

namespace mutation {

using pragproof::n3::Term;
using pragproof::n3::Triple;
using pragproof::reason::Proof;
using pragproof::reason::StepKind;
using pragproof::reason::StepRef;

struct Mutant {
  std::string kind;
  StepRef step;
  Proof proof;
};

inline std::vector<Term> term_pool(const Proof& proof) {
  std::set<Term> pool{Term::uri("urn:mutant"), Term::existential("mutant"), Term::literal("mutant")};
  for (const auto& s : proof.steps) {
    for (const Triple& t : s.gives.atoms) {
      pool.insert(t.subject);
      pool.insert(t.object);
    }
  }
  return {pool.begin(), pool.end()};
}

inline std::vector<StepRef> steps_where(const Proof& proof, auto pred) {
  std::vector<StepRef> out;
  for (StepRef i = 0; i < proof.steps.size(); ++i)
    if (pred(proof.steps[i])) out.push_back(i);
  return out;
}

/// Produces `count` mutants, cycling through the mutation kinds.
inline std::vector<Mutant> mutate(const Proof& proof, std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<Term> pool = term_pool(proof);
  const char* kinds[] = {"binding", "gives-drop", "gives-replace", "gives-add", "evidence-order", "source-swap", "rule"};

  std::vector<Mutant> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < count * 200; ++attempt) {
    std::string kind = kinds[attempt % std::size(kinds)];
    Proof m = proof;
    StepRef at = 0;
    if (kind == "binding") {
      auto cands = steps_where(proof, [](const auto& s) { return !s.bindings.empty(); });
      if (cands.empty()) continue;
      at = cands[pick(cands.size())];
      auto& b = m.steps[at].bindings[pick(m.steps[at].bindings.size())];
      Term v = pool[pick(pool.size())];
      if (v == b.value) continue;
      b.value = v;
    } else if (kind == "gives-drop" || kind == "gives-replace") {
      auto cands = steps_where(proof, [](const auto& s) { return !s.gives.atoms.empty(); });
      if (cands.empty()) continue;
      at = cands[pick(cands.size())];
      auto& atoms = m.steps[at].gives.atoms;
      std::size_t k = pick(atoms.size());
      if (kind == "gives-drop") {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        Term v = pool[pick(pool.size())];
        if (v == atoms[k].object) continue;
        atoms[k].object = v;
      }
    } else if (kind == "gives-add") {
      at = pick(proof.steps.size());
      m.steps[at].gives.atoms.push_back({Term::uri("urn:mutant"), Term::uri("urn:mutant"), pool[pick(pool.size())]});
    } else if (kind == "evidence-order") {
      auto cands = steps_where(proof, [](const auto& s) { return s.evidence.size() >= 2; });
      if (cands.empty()) continue;
      at = cands[pick(cands.size())];
      auto& ev = m.steps[at].evidence;
      std::size_t i = pick(ev.size()), j = pick(ev.size());
      if (proof.steps[ev[i]].gives == proof.steps[ev[j]].gives) continue;
      std::swap(ev[i], ev[j]);
    } else if (kind == "source-swap") {
      auto cands = steps_where(proof, [](const auto& s) { return s.kind == StepKind::Parsing; });
      if (cands.size() < 2) continue;
      StepRef a = cands[pick(cands.size())], b = cands[pick(cands.size())];
      if (proof.steps[a].gives == proof.steps[b].gives) continue;
      std::swap(m.steps[a].source, m.steps[b].source);
      at = a;
    } else {
      auto cands = steps_where(proof, [](const auto& s) { return s.rule.has_value(); });
      if (cands.empty()) continue;
      at = cands[pick(cands.size())];
      StepRef target = pick(proof.steps.size());
      if (proof.steps[target].gives == proof.steps[*proof.steps[at].rule].gives) continue;
      m.steps[at].rule = target;
    }
    out.push_back({kind, at, std::move(m)});
  }
  return out;
}

}  // namespace mutation
