#include "pragproof/reason/checker.hpp"

#include <set>
#include <stdexcept>

#include "pragproof/n3/algebra.hpp"

namespace pragproof::reason {

std::string to_string(const Violation& violation) {
  if (!violation.step) return violation.condition;
  return "step " + std::to_string(*violation.step) + ": " + violation.condition;
}

namespace {

std::vector<StepRef> references(const ProofStep& step) {
  std::vector<StepRef> out = step.components;
  if (step.because) out.push_back(*step.because);
  if (step.rule) out.push_back(*step.rule);
  out.insert(out.end(), step.evidence.begin(), step.evidence.end());
  return out;
}

class Checker {
 public:
  Checker(const Proof& proof, const std::map<std::string, n3::Formula>& sources) : proof_(proof), sources_(sources) {}

  std::vector<Violation> run() {
    if (!structure_ok()) return violations_;
    for (StepRef i = 0; i < proof_.steps.size(); ++i) check_step(i);
    return violations_;
  }

 private:
  const Proof& proof_;
  const std::map<std::string, n3::Formula>& sources_;
  std::vector<Violation> violations_;

  void fail(std::optional<StepRef> step, std::string condition) { violations_.push_back({step, std::move(condition)}); }

  bool structure_ok() {
    const auto& steps = proof_.steps;
    if (proof_.root >= steps.size()) {
      fail(std::nullopt, "root reference is dangling");
      return false;
    }
    if (steps[proof_.root].kind != StepKind::Proof) fail(proof_.root, "root step is not of kind Proof");
    for (StepRef i = 0; i < steps.size(); ++i) {
      if (i != proof_.root && steps[i].kind == StepKind::Proof) fail(i, "second step of kind Proof");
      for (StepRef ref : references(steps[i]))
        if (ref >= steps.size()) fail(i, "dangling reference to step " + std::to_string(ref));
    }
    if (!violations_.empty()) return false;

    enum class Mark { None, Active, Done };
    std::vector<Mark> mark(steps.size(), Mark::None);
    bool cyclic = false;
    std::vector<std::pair<StepRef, std::size_t>> stack;
    for (StepRef start = 0; start < steps.size() && !cyclic; ++start) {
      if (mark[start] != Mark::None) continue;
      stack.push_back({start, 0});
      mark[start] = Mark::Active;
      while (!stack.empty() && !cyclic) {
        auto& [node, next] = stack.back();
        std::vector<StepRef> refs = references(steps[node]);
        if (next == refs.size()) {
          mark[node] = Mark::Done;
          stack.pop_back();
          continue;
        }
        StepRef child = refs[next++];
        if (mark[child] == Mark::Active) {
          fail(child, "step graph is cyclic");
          cyclic = true;
        } else if (mark[child] == Mark::None) {
          mark[child] = Mark::Active;
          stack.push_back({child, 0});
        }
      }
    }
    return !cyclic;
  }

  void check_fields(StepRef i, const ProofStep& s) {
    bool conj = s.kind == StepKind::Proof || s.kind == StepKind::Conjunction;
    if (conj != !s.components.empty()) fail(i, "components must be present exactly for Proof and Conjunction steps");
    if ((s.kind == StepKind::Parsing) != s.source.has_value()) fail(i, "source must be present exactly for Parsing steps");
    if ((s.kind == StepKind::Extraction) != s.because.has_value()) fail(i, "because must be present exactly for Extraction steps");
    if ((s.kind == StepKind::Inference) != s.rule.has_value()) fail(i, "rule must be present exactly for Inference steps");
    if (s.kind != StepKind::Inference && (!s.evidence.empty() || !s.bindings.empty())) {
      fail(i, "evidence and bindings belong to Inference steps only");
    }
  }

  void check_step(StepRef i) {
    const ProofStep& s = proof_.steps[i];
    check_fields(i, s);
    switch (s.kind) {
      case StepKind::Parsing: {
        if (!s.source) return;
        auto it = sources_.find(*s.source);
        if (it == sources_.end()) {
          fail(i, "unknown source <" + *s.source + ">");
        } else if (!(it->second == s.gives)) {
          fail(i, "parsed formula differs from source <" + *s.source + ">");
        }
        return;
      }
      case StepKind::Extraction:
        if (s.because && !proof_.steps[*s.because].gives.contains(s.gives)) {
          fail(i, "extracted formula is not part of the premise");
        }
        return;
      case StepKind::Proof:
      case StepKind::Conjunction: {
        n3::Formula all;
        for (StepRef c : s.components) all.append(proof_.steps[c].gives);
        if (!(all == s.gives)) fail(i, "conjunction differs from the union of its components");
        return;
      }
      case StepKind::Inference:
        check_inference(i, s);
        return;
    }
  }

  void ancestors(StepRef ref, std::set<StepRef>& seen) const {
    if (!seen.insert(ref).second) return;
    for (StepRef r : references(proof_.steps[ref])) ancestors(r, seen);
  }

  void check_inference(StepRef i, const ProofStep& s) {
    if (!s.rule) return;
    const n3::Formula& rule_formula = proof_.steps[*s.rule].gives;
    if (!rule_formula.atoms.empty() || rule_formula.implications.size() != 1) {
      fail(i, "rule step does not give exactly one implication");
      return;
    }
    const n3::Implication& rule = rule_formula.implications.front();
    if (!rule.antecedent.is_graph() || !rule.consequent.is_graph()) {
      fail(i, "rule is not an implication between formulas");
      return;
    }
    std::vector<n3::Term> rule_vars = n3::variables_in_order(rule);
    std::set<n3::Term> known(rule_vars.begin(), rule_vars.end());

    n3::Substitution sigma;
    bool bindings_ok = true;
    for (const Binding& b : s.bindings) {
      if (!known.count(b.variable)) {
        fail(i, "binding for a variable the rule does not use");
        bindings_ok = false;
        continue;
      }
      if (sigma.find(b.variable)) {
        fail(i, "variable bound twice");
        bindings_ok = false;
        continue;
      }
      if (b.variable.is_universal() && !b.value.universal_free()) {
        fail(i, "universal bound to a term containing universals");
        bindings_ok = false;
      }
      try {
        sigma.bind(b.variable, b.value);
      } catch (const std::invalid_argument&) {
        fail(i, "variable bound to itself");
        bindings_ok = false;
      }
    }
    for (const n3::Term& v : rule_vars) {
      if (!sigma.find(v)) {
        fail(i, "rule variable left unbound");
        bindings_ok = false;
      }
    }
    if (!bindings_ok) return;

    const n3::Formula& antecedent = rule.antecedent.formula();
    if (s.evidence.size() != antecedent.atoms.size() || !antecedent.implications.empty()) {
      fail(i, "evidence count differs from the antecedent's conjunct count");
    } else {
      for (std::size_t k = 0; k < s.evidence.size(); ++k) {
        n3::Triple wanted = n3::apply_substitution(antecedent.atoms[k], sigma, n3::ApplyMode::Total);
        if (!proof_.steps[s.evidence[k]].gives.contains(wanted)) {
          fail(i, "evidence " + std::to_string(k) + " does not give the instantiated antecedent conjunct");
        }
      }
    }

    n3::Formula expected = n3::apply_substitution(rule.consequent.formula(), sigma, n3::ApplyMode::Total);
    if (!(expected == s.gives)) fail(i, "gives differs from the instantiated consequent");

    std::set<n3::Term> antecedent_vars = n3::variables(antecedent);
    std::set<n3::Term> fresh;
    for (const n3::Term& v : rule_vars) {
      if (!v.is_existential() || antecedent_vars.count(v)) continue;
      const n3::Term& value = *sigma.find(v);
      if (!value.is_existential()) {
        fail(i, "head existential _:" + v.text() + " not bound to a blank node");
      } else if (!fresh.insert(value).second) {
        fail(i, "two head existentials share the blank node _:" + value.text());
      }
    }
    if (fresh.empty()) return;
    std::set<StepRef> before;
    ancestors(*s.rule, before);
    for (StepRef e : s.evidence) ancestors(e, before);
    for (StepRef a : before) {
      for (const n3::Term& v : n3::variables(proof_.steps[a].gives)) {
        if (fresh.count(v)) fail(i, "blank node _:" + v.text() + " is not fresh");
      }
    }
  }
};

}  // namespace

std::vector<Violation> check_proof(const Proof& proof, const std::map<std::string, n3::Formula>& sources) {
  return Checker(proof, sources).run();
}

}  // namespace pragproof::reason
