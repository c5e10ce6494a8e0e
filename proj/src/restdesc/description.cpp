#include "pragproof/restdesc/description.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pragproof/n3/algebra.hpp"
#include "pragproof/n3/serializer.hpp"

namespace pragproof::restdesc {

namespace {

const std::string kHttp = n3::vocab::kHttp;

bool is_http(const n3::Term& p, const char* local) { return p.is_uri() && p.text() == kHttp + local; }
bool in_http_namespace(const n3::Term& p) { return p.is_uri() && p.text().rfind(kHttp, 0) == 0; }

std::set<n3::Term> universals(const n3::Formula& f) {
  std::set<n3::Term> out;
  for (const n3::Term& v : n3::variables(f))
    if (v.is_universal()) out.insert(v);
  return out;
}

}  // namespace

bool HttpRequestDescription::sufficiently_specified() const {
  for (const n3::Triple& t : triples.atoms) {
    if (t.subject != subject || is_http(t.predicate, "resp")) continue;
    if (!t.object.ground()) return false;
  }
  return true;
}

n3::Implication RestDescription::recompose() const {
  n3::Formula head = request.triples;
  head.append(postcondition);
  return {n3::Term::graph(precondition), n3::Term::graph(head)};
}

std::string to_string(const DescriptionViolation& violation) {
  if (!violation.term) return violation.condition;
  return violation.condition + ": " + n3::serialize_term(*violation.term);
}

namespace {

HttpRequestDescription fields_of(const n3::Term& subject, n3::Formula triples) {
  HttpRequestDescription out;
  out.subject = subject;
  for (const n3::Triple& t : triples.atoms) {
    if (t.subject == subject) {
      if (is_http(t.predicate, "methodName")) out.method = t.object;
      else if (is_http(t.predicate, "requestURI")) out.request_uri = t.object;
      else if (is_http(t.predicate, "body")) out.body = t.object;
      else if (is_http(t.predicate, "headers")) out.headers.push_back(t.object);
      else if (is_http(t.predicate, "resp")) out.response = t.object;
    }
  }
  if (out.response) {
    for (const n3::Triple& t : triples.atoms)
      if (t.subject == *out.response && is_http(t.predicate, "body")) out.response_body = t.object;
  }
  out.triples = std::move(triples);
  return out;
}

}  // namespace

ValidationResult validate_description(std::string source, const n3::Document& document) {
  const n3::Formula& body = document.body;
  if (body.implications.empty()) throw std::invalid_argument("description is not an implication");
  if (body.implications.size() > 1) throw std::invalid_argument("description contains more than one implication");
  if (!body.atoms.empty()) throw std::invalid_argument("description contains statements besides its implication");
  const n3::Implication& imp = body.implications.front();
  if (!imp.antecedent.is_graph() || !imp.consequent.is_graph()) {
    throw std::invalid_argument("description must relate two formulas");
  }

  ValidationResult result;
  auto fail = [&](std::string condition, std::optional<n3::Term> term = std::nullopt) {
    result.violations.push_back({std::move(condition), std::move(term)});
  };
  if (!n3::classify(body).simple) fail("description is not a simple formula");

  const n3::Formula& pre = imp.antecedent.formula();
  const n3::Formula& head = imp.consequent.formula();
  for (const n3::Term& v : n3::variables(pre))
    if (v.is_existential()) fail("precondition contains an existential variable", v);

  std::vector<n3::Term> subjects;
  for (const n3::Triple& t : head.atoms) {
    if (is_http(t.predicate, "methodName") && std::find(subjects.begin(), subjects.end(), t.subject) == subjects.end()) {
      subjects.push_back(t.subject);
    }
  }
  if (subjects.empty()) {
    fail("consequent has no http:methodName triple");
    return result;
  }
  if (subjects.size() > 1) fail("consequent describes more than one request", subjects[1]);
  const n3::Term& subject = subjects.front();
  if (!subject.is_existential()) fail("request subject is not an existential variable", subject);

  std::set<n3::Term> group{subject};
  for (bool grew = true; grew;) {
    grew = false;
    for (const n3::Triple& t : head.atoms) {
      if (!group.count(t.subject) || !t.object.is_existential()) continue;
      bool response_link = (t.subject == subject && is_http(t.predicate, "resp")) || t.subject != subject;
      if (response_link && group.insert(t.object).second) grew = true;
    }
  }
  n3::Formula request_triples;
  n3::Formula post;
  for (const n3::Triple& t : head.atoms) (group.count(t.subject) ? request_triples : post).atoms.push_back(t);
  post.implications = head.implications;

  int methods = 0, uris = 0;
  for (const n3::Triple& t : request_triples.atoms) {
    if (t.subject != subject) continue;
    if (is_http(t.predicate, "methodName")) ++methods;
    if (is_http(t.predicate, "requestURI")) ++uris;
    if (!in_http_namespace(t.predicate)) fail("request triple with a non-HTTP predicate", t.predicate);
    if (!is_http(t.predicate, "resp") && !(t.object.is_universal() || t.object.is_uri() || t.object.is_literal())) {
      fail("request object must be a universal variable, IRI or literal", t.object);
    }
  }
  if (methods != 1) fail("request needs exactly one http:methodName triple");
  if (uris != 1) fail("request needs exactly one http:requestURI triple");

  std::set<n3::Term> pre_vars = universals(pre);
  for (const n3::Term& v : universals(request_triples))
    if (!pre_vars.count(v)) fail("universal in the request does not occur in the precondition", v);
  for (const n3::Term& v : universals(post))
    if (!pre_vars.count(v)) fail("universal in the postcondition does not occur in the precondition", v);

  if (result.violations.empty()) {
    result.description = RestDescription{std::move(source), pre, fields_of(subject, std::move(request_triples)), std::move(post), imp};
  }
  return result;
}

HttpRequestDescription instantiate(const HttpRequestDescription& request, const std::vector<reason::Binding>& bindings) {
  n3::Substitution sigma;
  for (const reason::Binding& b : bindings)
    if (b.variable != b.value) sigma.bind(b.variable, b.value);
  auto apply = [&](const n3::Term& t) { return n3::apply_substitution(t, sigma, n3::ApplyMode::Total); };
  return fields_of(apply(request.subject), n3::apply_substitution(request.triples, sigma, n3::ApplyMode::Total));
}

std::vector<ExtractedRequest> extract_requests(const reason::Proof& proof, const std::vector<RestDescription>& rules) {
  std::map<std::string, const RestDescription*> by_source;
  for (const RestDescription& d : rules) by_source.emplace(d.source, &d);
  std::vector<ExtractedRequest> out;
  for (reason::StepRef step : reason::inferences_in_dependency_order(proof)) {
    auto source = reason::rule_source(proof, step);
    if (!source) continue;
    auto it = by_source.find(*source);
    if (it == by_source.end()) continue;
    HttpRequestDescription request = instantiate(it->second->request, proof.at(step).bindings);
    bool ready = request.sufficiently_specified();
    out.push_back({std::move(request), ready, step, *source});
  }
  return out;
}

namespace {

std::string lexical(const n3::Term& t) {
  if (t.is_uri() || t.is_literal()) return t.text();
  return n3::serialize_term(t);
}

}  // namespace

WireRequest to_wire_request(const HttpRequestDescription& request) {
  if (!request.sufficiently_specified()) {
    throw NotSufficientlySpecified("request " + n3::serialize_term(request.method) + " " +
                                   n3::serialize_term(request.request_uri) + " has unbound parts");
  }
  WireRequest out;
  out.method = lexical(request.method);
  out.target = lexical(request.request_uri);
  if (out.method.empty() || out.target.empty()) throw std::invalid_argument("request method and target must be nonempty");
  if (request.body) {
    if (request.body->is_uri()) {
      out.body = WireBody{WireBody::Kind::EntityRef, request.body->text()};
    } else {
      out.body = WireBody{WireBody::Kind::Inline, lexical(*request.body)};
    }
  }
  for (const n3::Term& h : request.headers) {
    std::string text = lexical(h);
    auto colon = text.find(':');
    if (h.is_literal() && colon != std::string::npos) {
      std::string value = text.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      out.headers.emplace_back(text.substr(0, colon), value);
    } else {
      out.headers.emplace_back("", text);
    }
  }
  return out;
}

}  // namespace pragproof::restdesc
