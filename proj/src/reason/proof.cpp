#include "pragproof/reason/proof.hpp"

#include <functional>
#include <stdexcept>

namespace pragproof::reason {

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Proof: return "Proof";
    case StepKind::Parsing: return "Parsing";
    case StepKind::Extraction: return "Extraction";
    case StepKind::Conjunction: return "Conjunction";
    case StepKind::Inference: return "Inference";
  }
  return "?";
}

std::optional<std::string> rule_source(const Proof& proof, StepRef inference) {
  const ProofStep& step = proof.at(inference);
  if (step.kind != StepKind::Inference || !step.rule) return std::nullopt;
  StepRef cur = *step.rule;
  for (std::size_t hops = 0; hops <= proof.steps.size(); ++hops) {
    const ProofStep& s = proof.at(cur);
    if (s.kind == StepKind::Parsing) return s.source;
    if (s.kind != StepKind::Extraction || !s.because) return std::nullopt;
    cur = *s.because;
  }
  return std::nullopt;
}

std::size_t count_rule_applications(const Proof& proof, const std::set<std::string>& rule_sources) {
  std::size_t count = 0;
  for (StepRef i = 0; i < proof.steps.size(); ++i) {
    if (proof.steps[i].kind != StepKind::Inference) continue;
    auto source = rule_source(proof, i);
    if (source && rule_sources.count(*source)) ++count;
  }
  return count;
}

namespace {

std::vector<StepRef> dependencies(const ProofStep& step) {
  std::vector<StepRef> out = step.components;
  if (step.because) out.push_back(*step.because);
  if (step.rule) out.push_back(*step.rule);
  out.insert(out.end(), step.evidence.begin(), step.evidence.end());
  return out;
}

}  // namespace

std::vector<StepRef> inferences_in_dependency_order(const Proof& proof) {
  enum class Mark { None, Active, Done };
  std::vector<Mark> mark(proof.steps.size(), Mark::None);
  std::vector<StepRef> out;
  std::function<void(StepRef)> visit = [&](StepRef ref) {
    if (ref >= proof.steps.size()) throw std::out_of_range("dangling step reference");
    if (mark[ref] == Mark::Done) return;
    if (mark[ref] == Mark::Active) throw std::invalid_argument("cyclic proof");
    mark[ref] = Mark::Active;
    for (StepRef dep : dependencies(proof.steps[ref])) visit(dep);
    mark[ref] = Mark::Done;
    if (proof.steps[ref].kind == StepKind::Inference) out.push_back(ref);
  };
  for (StepRef i = 0; i < proof.steps.size(); ++i) visit(i);
  return out;
}

Proof elide_extractions(const Proof& proof) {
  auto elidable = [&](StepRef ref) {
    const ProofStep& s = proof.steps[ref];
    return s.kind == StepKind::Extraction && s.because && proof.steps[*s.because].kind == StepKind::Inference;
  };
  auto target = [&](StepRef ref) { return elidable(ref) ? *proof.steps[ref].because : ref; };

  std::vector<std::optional<StepRef>> renumber(proof.steps.size());
  Proof out;
  out.skolem_count = proof.skolem_count;
  for (StepRef i = 0; i < proof.steps.size(); ++i) {
    if (elidable(i)) continue;
    renumber[i] = out.steps.size();
    out.steps.push_back(proof.steps[i]);
  }
  auto map = [&](StepRef ref) { return *renumber[target(ref)]; };
  for (ProofStep& s : out.steps) {
    for (StepRef& c : s.components) c = map(c);
    for (StepRef& e : s.evidence) e = map(e);
    if (s.because) s.because = map(*s.because);
    if (s.rule) s.rule = map(*s.rule);
  }
  out.root = map(proof.root);
  return out;
}

}  // namespace pragproof::reason
