#include "pragproof/agent/agent.hpp"

#include <algorithm>
#include <sstream>

#include "pragproof/n3/algebra.hpp"
#include "pragproof/n3/parser.hpp"
#include "pragproof/n3/serializer.hpp"
#include "pragproof/reason/proof_io.hpp"

namespace pragproof::agent {

const char* to_string(Decision decision) { return decision == Decision::Advance ? "Advance" : "Retire"; }

const char* to_string(OutcomeStatus status) { return status == OutcomeStatus::Success ? "Success" : "Failure"; }

namespace {

bool has_nested_formula(const n3::Formula& f) {
  for (const n3::Triple& t : f.atoms)
    if (t.subject.is_formula_expression() || t.predicate.is_formula_expression() || t.object.is_formula_expression())
      return true;
  return !f.implications.empty();
}

std::set<n3::Term> universals(const n3::Formula& f) {
  std::set<n3::Term> out;
  for (const n3::Term& v : n3::variables(f))
    if (v.is_universal()) out.insert(v);
  return out;
}

void validate_background(const reason::Source& source) {
  const n3::Formula& body = source.document.body;
  for (const n3::Triple& t : body.atoms) {
    if (!t.subject.ground() || !t.predicate.ground() || !t.object.ground())
      throw InvalidProblem("background fact with a variable in " + source.iri);
  }
  for (const n3::Implication& imp : body.implications) {
    if (!imp.antecedent.is_graph() || !imp.consequent.is_graph())
      throw InvalidProblem("background rule without formula operands in " + source.iri);
    const n3::Formula& pre = imp.antecedent.formula();
    const n3::Formula& post = imp.consequent.formula();
    for (const n3::Formula* part : {&pre, &post})
      for (const n3::Term& v : n3::variables(*part))
        if (v.is_existential()) throw InvalidProblem("background rule with an existential in " + source.iri);
    auto body_vars = universals(pre);
    for (const n3::Term& v : universals(post))
      if (!body_vars.count(v)) throw InvalidProblem("background rule head universal ?" + v.text() + " in " + source.iri);
  }
}

}  // namespace

void CompositionProblem::validate() const {
  std::set<std::string> names{goal.source};
  auto claim = [&](const std::string& iri) {
    if (!names.insert(iri).second) throw InvalidProblem("duplicate source " + iri);
  };
  for (const reason::Source& s : state) {
    claim(s.iri);
    if (!s.document.body.implications.empty()) throw InvalidProblem("initial state " + s.iri + " contains rules");
    if (!s.document.body.ground()) throw InvalidProblem("initial state " + s.iri + " is not ground");
  }
  for (const reason::Source& s : background) {
    claim(s.iri);
    validate_background(s);
  }
  for (const restdesc::RestDescription& d : descriptions) claim(d.source);
  for (const n3::Term* side : {&goal.rule.antecedent, &goal.rule.consequent}) {
    if (!side->is_graph() || has_nested_formula(side->formula()))
      throw InvalidProblem("goal must be a simple formula");
  }
}

CompositionProblem make_problem(std::vector<reason::Source> state, reason::FilterRule goal,
                                const std::vector<reason::Source>& descriptions,
                                std::vector<reason::Source> background) {
  CompositionProblem problem{std::move(state), std::move(goal), {}, std::move(background)};
  for (const reason::Source& s : descriptions) {
    restdesc::ValidationResult result;
    try {
      result = restdesc::validate_description(s.iri, s.document);
    } catch (const std::invalid_argument& e) {
      throw InvalidProblem("description " + s.iri + ": " + e.what());
    }
    if (!result.description) {
      throw InvalidProblem("description " + s.iri + ": " + restdesc::to_string(result.violations.front()));
    }
    problem.descriptions.push_back(std::move(*result.description));
  }
  problem.validate();
  return problem;
}

std::optional<SelectedRequest> select_request(const reason::Proof& pre_proof,
                                              const std::vector<restdesc::RestDescription>& rules) {
  for (restdesc::ExtractedRequest& r : restdesc::extract_requests(pre_proof, rules)) {
    if (!r.sufficiently_specified) continue;
    restdesc::WireRequest wire = restdesc::to_wire_request(r.request);
    return SelectedRequest{std::move(r), std::move(wire)};
  }
  return std::nullopt;
}

n3::Formula incorporate_response(const WireResponse& response, std::vector<std::string>& warnings) {
  if (response.status < 200 || response.status >= 300) {
    warnings.push_back("status " + std::to_string(response.status) + "; response ignored");
    return {};
  }
  std::string media = response.media_type.substr(0, response.media_type.find(';'));
  media.erase(std::remove(media.begin(), media.end(), ' '), media.end());
  if (media != "text/n3" && media != "text/turtle") {
    warnings.push_back("media type " + response.media_type + "; response ignored");
    return {};
  }
  n3::Document doc;
  try {
    doc = n3::parse_document(response.body);
  } catch (const n3::ParseError& e) {
    warnings.push_back(std::string("unparseable response: ") + e.what());
    return {};
  }
  n3::Formula g;
  for (const n3::Triple& t : doc.body.atoms) {
    if (t.subject.ground() && t.predicate.ground() && t.object.ground()) {
      g.atoms.push_back(t);
    } else {
      warnings.push_back("non-ground triple dropped: " + n3::serialize_statements(n3::Formula({t}), doc.prefixes));
    }
  }
  if (!doc.body.implications.empty()) warnings.push_back("rules in a response dropped");
  return g;
}

namespace {

class Loop {
 public:
  Loop(const CompositionProblem& problem, Transport& transport, const AgentOptions& options)
      : problem_(problem), transport_(transport), options_(options) {
    for (const reason::Source& s : problem.state) kb_.add_source(s.iri, s.document);
    for (const reason::Source& s : problem.background) kb_.add_source(s.iri, s.document);
    for (const restdesc::RestDescription& d : problem.descriptions) {
      kb_.add_source(d.source, n3::Document{{}, n3::Formula({}, {d.original}), {}});
    }
  }

  ExecutionOutcome run() {
    while (true) {
      auto pre = prove();
      if (!pre) return fail(cause_);
      std::size_t n_pre = applications(*pre);
      out_.iteration_bound += n_pre;
      while (true) {
        if (n_pre == 0) return succeed(*pre);
        auto selected = select_request(*pre, active());
        if (!selected) return fail("no sufficiently specified request in the pre-proof");
        ExecutedStep step;
        step.epoch = out_.retired.size();
        step.n_pre = n_pre;
        step.request = selected->wire;
        step.sufficiently_specified = selected->request.sufficiently_specified;
        step.rule = selected->request.rule_source;
        step.lemma = reason::step_names(*pre).at(selected->request.step);
        // Execute and learn.
        WireResponse response = transport_.send(selected->wire);
        step.response_status = response.status;
        step.response = incorporate_response(response, out_.warnings);
        std::string name = "response_" + std::to_string(++responses_);
        kb_.add_source(name, n3::Document{{}, step.response, {}});
        epoch_responses_.push_back(name);
        auto post = prove();
        if (!post && budget_exhausted_) return fail(cause_);
        step.n_post = post ? applications(*post) : n_pre;
        bool advance = step.n_post < n_pre;
        step.decision = advance ? Decision::Advance : Decision::Retire;
        out_.trace.push_back(step);
        if (out_.trace.size() > out_.iteration_bound) {
          throw std::logic_error("pragmatic proof loop exceeded its iteration bound");
        }
        if (advance) {
          pre = std::move(post);
          n_pre = step.n_post;
          continue;
        }
        out_.retired.insert(step.rule);
        if (!options_.keep_learned) {
          for (const std::string& r : epoch_responses_) stale_.insert(r);
          epoch_responses_.clear();
        }
        break;
      }
    }
  }

 private:
  std::vector<restdesc::RestDescription> active() const {
    std::vector<restdesc::RestDescription> out;
    for (const restdesc::RestDescription& d : problem_.descriptions)
      if (!out_.retired.count(d.source)) out.push_back(d);
    return out;
  }

  std::size_t applications(const reason::Proof& proof) const {
    std::set<std::string> names;
    for (const restdesc::RestDescription& d : problem_.descriptions)
      if (!out_.retired.count(d.source)) names.insert(d.source);
    return reason::count_rule_applications(proof, names);
  }

  std::optional<reason::Proof> prove() {
    reason::ProveOptions opts;
    opts.excluded_sources = out_.retired;
    opts.excluded_sources.insert(stale_.begin(), stale_.end());
    auto result = reason::prove(kb_, problem_.goal, options_.budget, opts);
    budget_exhausted_ = result.status == reason::ProveStatus::BudgetExceeded;
    if (result.status != reason::ProveStatus::Proved) {
      cause_ = budget_exhausted_ ? "reasoner budget exceeded: " + result.message : "no proof of the goal";
      return std::nullopt;
    }
    return std::move(result.proof);
  }

  ExecutionOutcome fail(std::string cause) {
    out_.status = OutcomeStatus::Failure;
    out_.cause = std::move(cause);
    return std::move(out_);
  }

  ExecutionOutcome succeed(const reason::Proof& proof) {
    for (const n3::Triple& t : proof.conclusion().atoms)
      if (!out_.goal_instance.contains(t)) out_.goal_instance.atoms.push_back(t);
    if (!out_.goal_instance.ground()) throw std::logic_error("goal instance is not ground");
    // The instance must follow from the state and responses alone.
    auto check = reason::FilterRule::from_document(
        problem_.goal.source,
        n3::Document{{}, n3::Formula({}, {{n3::Term::graph(out_.goal_instance), n3::Term::graph(out_.goal_instance)}}), {}});
    reason::ProveOptions opts;
    opts.excluded_sources = stale_;
    for (const restdesc::RestDescription& d : problem_.descriptions) opts.excluded_sources.insert(d.source);
    auto result = reason::prove(kb_, check, options_.budget, opts);
    if (result.status != reason::ProveStatus::Proved) throw std::logic_error("goal instance not entailed by the state");
    out_.status = OutcomeStatus::Success;
    out_.final_proof = proof;
    return std::move(out_);
  }

  const CompositionProblem& problem_;
  Transport& transport_;
  const AgentOptions& options_;
  reason::KnowledgeBase kb_;
  ExecutionOutcome out_;
  std::size_t responses_ = 0;
  std::vector<std::string> epoch_responses_;
  std::set<std::string> stale_;
  bool budget_exhausted_ = false;
  std::string cause_;
};

}  // namespace

ExecutionOutcome run(const CompositionProblem& problem, Transport& transport, const AgentOptions& options) {
  problem.validate();
  options.budget.validate();
  return Loop(problem, transport, options).run();
}

std::vector<std::string> invented_targets(const CompositionProblem& problem, const ExecutionOutcome& outcome) {
  std::set<std::string> known;
  auto learn = [&](const n3::Formula& f) {
    for (const n3::Triple& t : f.atoms)
      for (const n3::Term* term : {&t.subject, &t.predicate, &t.object})
        if (term->is_uri() || term->is_literal()) known.insert(term->text());
  };
  for (const reason::Source& s : problem.state) learn(s.document.body);
  std::vector<std::string> out;
  for (const ExecutedStep& step : outcome.trace) {
    if (step.request.method == "GET" && !known.count(step.request.target)) out.push_back(step.request.target);
    learn(step.response);
  }
  return out;
}

namespace {

constexpr const char* kPp = "http://example.org/pragmatic-proof#";
constexpr const char* kHttp = "http://www.w3.org/2011/http#";

std::string quoted(const std::string& s) { return n3::serialize_term(n3::Term::literal(s)); }

}  // namespace

std::string serialize_trace(const ExecutionOutcome& outcome) {
  n3::PrefixMap prefixes{{"pp", kPp}, {"http", kHttp}};
  std::ostringstream out;
  for (const auto& [label, ns] : prefixes) out << "@prefix " << label << ": <" << ns << ">.\n";
  out << "\n<#execution> a pp:Execution;\n  pp:status " << quoted(to_string(outcome.status));
  if (outcome.status == OutcomeStatus::Success) {
    out << ";\n  pp:goalInstance " << n3::serialize_graph(outcome.goal_instance, prefixes, 2);
  } else {
    out << ";\n  pp:cause " << quoted(outcome.cause);
  }
  for (const std::string& r : outcome.retired) out << ";\n  pp:retired " << n3::serialize_term(n3::Term::uri(r));
  out << ";\n  pp:steps (";
  for (std::size_t i = 0; i < outcome.trace.size(); ++i) out << (i ? " " : "") << "<#step" << i + 1 << ">";
  out << ").\n";
  for (std::size_t i = 0; i < outcome.trace.size(); ++i) {
    const ExecutedStep& s = outcome.trace[i];
    out << "\n<#step" << i + 1 << "> a pp:ExecutedStep;\n"
        << "  pp:epoch " << s.epoch << ";\n"
        << "  pp:nPre " << s.n_pre << ";\n"
        << "  pp:rule " << n3::serialize_term(n3::Term::uri(s.rule)) << ";\n"
        << "  pp:lemma <#" << s.lemma << ">;\n"
        << "  pp:request [ http:methodName " << quoted(s.request.method) << "; http:requestURI "
        << quoted(s.request.target);
    if (s.request.body) {
      out << "; http:body "
          << (s.request.body->kind == restdesc::WireBody::Kind::EntityRef ? n3::serialize_term(n3::Term::uri(s.request.body->value))
                                                                          : quoted(s.request.body->value));
    }
    out << " ];\n"
        << "  pp:responseStatus " << s.response_status << ";\n"
        << "  pp:responseGives " << n3::serialize_graph(s.response, prefixes, 2) << ";\n"
        << "  pp:nPost " << s.n_post << ";\n"
        << "  pp:decision " << quoted(to_string(s.decision)) << ".\n";
  }
  return out.str();
}

}  // namespace pragproof::agent
