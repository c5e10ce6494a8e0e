#include "pragproof/reason/proof_io.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pragproof/n3/algebra.hpp"
#include "pragproof/n3/parser.hpp"

namespace pragproof::reason {

namespace {

const std::string kR = n3::vocab::kReason;
const std::string kN3 = n3::vocab::kRei;

std::string quoted(const std::string& s) { return n3::serialize_term(n3::Term::literal(s)); }

std::string variable_name(const n3::Term& v, const std::vector<n3::Term>& rule_vars) {
  auto it = std::find(rule_vars.begin(), rule_vars.end(), v);
  if (it != rule_vars.end()) return "var#x" + std::to_string(it - rule_vars.begin());
  return std::string("var#") + (v.is_universal() ? "?" : "_:") + v.text();
}

std::string value_text(const n3::Term& v, const n3::PrefixMap& prefixes) {
  if (v.is_uri()) return "[ n3:uri " + quoted(v.text()) + "]";
  if (v.is_existential()) return "[ n3:nodeId " + quoted("_:" + v.text()) + "]";
  return "[ n3:value " + n3::serialize_term(v, prefixes) + "]";
}

}  // namespace

std::vector<std::string> step_names(const Proof& proof) {
  std::vector<std::string> names(proof.steps.size());
  std::size_t counter = 0;
  names.at(proof.root) = "proof";
  for (StepRef i = 0; i < proof.steps.size(); ++i) {
    if (i == proof.root || proof.steps[i].kind == StepKind::Parsing) continue;
    names[i] = "lemma" + std::to_string(++counter);
  }
  return names;
}

std::string serialize_proof(const Proof& input, const ProofFormat& format) {
  Proof proof = format.elide_extractions ? elide_extractions(input) : input;
  n3::PrefixMap prefixes = format.prefixes;
  prefixes["r"] = kR;
  prefixes["n3"] = kN3;

  std::vector<std::string> names = step_names(proof);
  std::vector<StepRef> order{proof.root};
  for (StepRef i = 0; i < proof.steps.size(); ++i) {
    if (i != proof.root && !names[i].empty()) order.push_back(i);
  }
  auto ref = [&](StepRef r) {
    const ProofStep& s = proof.steps.at(r);
    if (s.kind == StepKind::Parsing) {
      return "[ a r:Parsing; r:source " + n3::serialize_term(n3::Term::uri(s.source.value_or("")), {}) + " ]";
    }
    return "<#" + names[r] + ">";
  };

  std::ostringstream out;
  for (const auto& [label, ns] : prefixes) out << "@prefix " << label << ": <" << ns << ">.\n";
  for (StepRef i : order) {
    const ProofStep& s = proof.steps[i];
    out << "\n<#" << names[i] << "> a ";
    switch (s.kind) {
      case StepKind::Proof: out << "r:Proof, r:Conjunction"; break;
      case StepKind::Conjunction: out << "r:Conjunction"; break;
      case StepKind::Extraction: out << "r:Extraction"; break;
      case StepKind::Inference: out << "r:Inference"; break;
      case StepKind::Parsing: out << "r:Parsing"; break;
    }
    if (!s.components.empty()) {
      out << ";\n  r:component ";
      for (std::size_t c = 0; c < s.components.size(); ++c) out << (c ? ", " : "") << ref(s.components[c]);
    }
    out << ";\n  r:gives " << n3::serialize_graph(s.gives, prefixes, 2);
    if (s.kind == StepKind::Inference) {
      out << ";\n  r:evidence (";
      for (std::size_t e = 0; e < s.evidence.size(); ++e) out << (e ? " " : "") << ref(s.evidence[e]);
      out << ")";
      std::vector<n3::Term> rule_vars;
      if (s.rule) {
        const n3::Formula& rf = proof.steps.at(*s.rule).gives;
        if (rf.implications.size() == 1) rule_vars = n3::variables_in_order(rf.implications.front());
      }
      for (const Binding& b : s.bindings) {
        out << ";\n  r:binding [ r:variable [ n3:uri " << quoted(variable_name(b.variable, rule_vars))
            << "]; r:boundTo " << value_text(b.value, prefixes) << "]";
      }
    }
    if (s.rule) out << ";\n  r:rule " << ref(*s.rule);
    if (s.because) out << ";\n  r:because " << ref(*s.because);
    if (s.source) out << ";\n  r:source " << n3::serialize_term(n3::Term::uri(*s.source), {});
    out << ".\n";
  }
  return out.str();
}

namespace {

StepKind kind_of(const std::vector<std::string>& types, bool& found) {
  found = true;
  auto has = [&](const char* local) { return std::find(types.begin(), types.end(), kR + local) != types.end(); };
  if (has("Proof")) return StepKind::Proof;
  if (has("Inference")) return StepKind::Inference;
  if (has("Extraction")) return StepKind::Extraction;
  if (has("Parsing")) return StepKind::Parsing;
  if (has("Conjunction")) return StepKind::Conjunction;
  found = false;
  return StepKind::Parsing;
}

class ProofReader {
 public:
  explicit ProofReader(const n3::Formula& body) {
    for (const n3::Triple& t : body.atoms) {
      auto [it, inserted] = index_.try_emplace(t.subject, order_.size());
      if (inserted) order_.push_back(t.subject);
      edges_[it->second].emplace_back(t.predicate, t.object);
    }
  }

  std::vector<n3::Term> objects(const n3::Term& subject, const std::string& predicate) const {
    std::vector<n3::Term> out;
    auto it = index_.find(subject);
    if (it == index_.end()) return out;
    auto e = edges_.find(it->second);
    for (const auto& [p, o] : e->second)
      if (p.is_uri() && p.text() == predicate) out.push_back(o);
    return out;
  }

  std::optional<n3::Term> object(const n3::Term& subject, const std::string& predicate) const {
    auto all = objects(subject, predicate);
    if (all.size() > 1) throw std::invalid_argument("repeated " + predicate + " on one proof node");
    if (all.empty()) return std::nullopt;
    return all.front();
  }

  const std::vector<n3::Term>& subjects() const { return order_; }

 private:
  std::unordered_map<n3::Term, std::size_t> index_;
  std::vector<n3::Term> order_;
  std::unordered_map<std::size_t, std::vector<std::pair<n3::Term, n3::Term>>> edges_;
};

std::string literal_text(const std::optional<n3::Term>& t, const char* what) {
  if (!t || !t->is_literal()) throw std::invalid_argument(std::string("binding ") + what + " is not a string");
  return t->text();
}

}  // namespace

Proof parse_proof(std::string_view text, const std::map<std::string, n3::Formula>& sources) {
  n3::Document doc = n3::parse_document(text);
  ProofReader reader(doc.body);
  const std::string type = n3::vocab::kRdfType;

  struct Node {
    n3::Term term;
    StepKind kind;
  };
  std::vector<Node> steps_nodes;
  std::vector<Node> parsing_nodes;
  for (const n3::Term& subject : reader.subjects()) {
    std::vector<std::string> types;
    for (const n3::Term& t : reader.objects(subject, type))
      if (t.is_uri()) types.push_back(t.text());
    bool found = false;
    StepKind kind = kind_of(types, found);
    if (!found) continue;
    (kind == StepKind::Parsing ? parsing_nodes : steps_nodes).push_back({subject, kind});
  }

  Proof proof;
  std::unordered_map<n3::Term, StepRef> refs;
  std::map<std::string, StepRef> parsing_by_source;
  for (const Node& node : steps_nodes) {
    refs.emplace(node.term, proof.steps.size());
    ProofStep step;
    step.kind = node.kind;
    proof.steps.push_back(std::move(step));
  }
  for (const Node& node : parsing_nodes) {
    auto source = reader.object(node.term, kR + "source");
    if (!source || !source->is_uri()) throw std::invalid_argument("Parsing step without an IRI source");
    auto [it, inserted] = parsing_by_source.try_emplace(source->text(), proof.steps.size());
    if (inserted) {
      ProofStep step;
      step.kind = StepKind::Parsing;
      step.source = source->text();
      auto known = sources.find(source->text());
      if (known != sources.end()) step.gives = known->second;
      proof.steps.push_back(std::move(step));
    }
    refs.emplace(node.term, it->second);
  }

  auto resolve = [&](const n3::Term& t) {
    auto it = refs.find(t);
    if (it == refs.end()) throw std::invalid_argument("reference to an undeclared proof step");
    return it->second;
  };

  bool root_found = false;
  std::vector<bool> has_gives(proof.steps.size(), false);
  for (std::size_t n = 0; n < steps_nodes.size(); ++n) {
    const n3::Term& node = steps_nodes[n].term;
    ProofStep& step = proof.steps[n];
    if (step.kind == StepKind::Proof) {
      if (root_found) throw std::invalid_argument("more than one r:Proof node");
      proof.root = n;
      root_found = true;
    }
    if (auto gives = reader.object(node, kR + "gives")) {
      if (!gives->is_graph()) throw std::invalid_argument("r:gives must be a formula");
      step.gives = gives->formula();
      has_gives[n] = true;
    }
    for (const n3::Term& c : reader.objects(node, kR + "component")) step.components.push_back(resolve(c));
    if (auto because = reader.object(node, kR + "because")) step.because = resolve(*because);
    if (auto rule = reader.object(node, kR + "rule")) step.rule = resolve(*rule);
    if (auto evidence = reader.object(node, kR + "evidence")) {
      if (!evidence->is_list()) throw std::invalid_argument("r:evidence must be a list");
      for (const n3::Term& e : evidence->items()) step.evidence.push_back(resolve(e));
    }
  }
  if (!root_found) throw std::invalid_argument("no r:Proof node");

  std::vector<int> state(proof.steps.size(), 0);
  std::function<void(StepRef)> fill = [&](StepRef i) {
    if (i >= has_gives.size() || has_gives[i] || state[i]) return;
    state[i] = 1;
    ProofStep& step = proof.steps[i];
    if (step.kind == StepKind::Extraction && step.because) {
      fill(*step.because);
      proof.steps[i].gives = proof.steps[*proof.steps[i].because].gives;
    }
  };
  for (StepRef i = 0; i < steps_nodes.size(); ++i) fill(i);

  for (std::size_t n = 0; n < steps_nodes.size(); ++n) {
    ProofStep& step = proof.steps[n];
    std::vector<n3::Term> rule_vars;
    if (step.rule) {
      const n3::Formula& rf = proof.steps[*step.rule].gives;
      if (rf.implications.size() == 1) rule_vars = n3::variables_in_order(rf.implications.front());
    }
    for (const n3::Term& b : reader.objects(steps_nodes[n].term, kR + "binding")) {
      auto variable = reader.object(b, kR + "variable");
      auto bound = reader.object(b, kR + "boundTo");
      if (!variable || !bound) throw std::invalid_argument("binding without r:variable or r:boundTo");
      std::string name = literal_text(reader.object(*variable, kN3 + "uri"), "variable");
      if (name.rfind("var#", 0) != 0) throw std::invalid_argument("binding variable must be named var#...");
      name.erase(0, 4);
      n3::Term var;
      if (name.rfind("x", 0) == 0 && name.size() > 1 &&
          std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        std::size_t k = std::stoul(name.substr(1));
        if (k >= rule_vars.size()) throw std::invalid_argument("binding refers to var#" + name + " beyond the rule's variables");
        var = rule_vars[k];
      } else if (name.rfind("?", 0) == 0) {
        var = n3::Term::universal(name.substr(1));
      } else if (name.rfind("_:", 0) == 0) {
        var = n3::Term::existential(name.substr(2));
      } else {
        throw std::invalid_argument("unrecognised binding variable var#" + name);
      }
      n3::Term value;
      if (auto uri = reader.object(*bound, kN3 + "uri")) {
        value = n3::Term::uri(literal_text(uri, "value"));
      } else if (auto node = reader.object(*bound, kN3 + "nodeId")) {
        std::string id = literal_text(node, "value");
        if (id.rfind("_:", 0) == 0) id.erase(0, 2);
        value = n3::Term::existential(id);
      } else if (auto plain = reader.object(*bound, kN3 + "value")) {
        value = *plain;
      } else {
        throw std::invalid_argument("binding value needs n3:uri, n3:nodeId or n3:value");
      }
      step.bindings.push_back({var, value});
    }
  }
  std::set<n3::Term> skolems;
  for (const ProofStep& s : proof.steps)
    for (const Binding& b : s.bindings)
      if (b.variable.is_existential()) skolems.insert(b.value);
  proof.skolem_count = skolems.size();
  return proof;
}

}  // namespace pragproof::reason
