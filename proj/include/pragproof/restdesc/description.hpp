#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pragproof/n3/term.hpp"
#include "pragproof/reason/proof.hpp"

namespace pragproof::restdesc {

/// The request part of a description's consequent: the triples of one existential
/// subject carrying http:methodName, plus the response node's triples.
struct HttpRequestDescription {
  n3::Term subject;
  n3::Term method;
  n3::Term request_uri;
  std::optional<n3::Term> body;
  std::vector<n3::Term> headers;
  std::optional<n3::Term> response;
  std::optional<n3::Term> response_body;
  n3::Formula triples;

  /// Every object of a request triple other than http:resp is ground.
  bool sufficiently_specified() const;
};

struct RestDescription {
  std::string source;
  n3::Formula precondition;
  HttpRequestDescription request;
  n3::Formula postcondition;
  n3::Implication original;

  /// `{precondition} => {request postcondition}` rebuilt from the parts.
  n3::Implication recompose() const;
};

struct DescriptionViolation {
  std::string condition;
  std::optional<n3::Term> term;
};

std::string to_string(const DescriptionViolation& violation);

struct ValidationResult {
  std::optional<RestDescription> description;  // set exactly when there are no violations
  std::vector<DescriptionViolation> violations;
};

/// Decomposes a description and checks its syntactic conditions. Throws
/// std::invalid_argument when the document is not exactly one implication.
ValidationResult validate_description(std::string source, const n3::Document& document);

/// Applies a substitution to every part of a request description.
HttpRequestDescription instantiate(const HttpRequestDescription& request, const std::vector<reason::Binding>& bindings);

struct ExtractedRequest {
  HttpRequestDescription request;
  bool sufficiently_specified = false;
  reason::StepRef step = 0;
  std::string rule_source;
};

/// One entry per Inference applying one of `rules`, with its bindings applied, in an
/// order where every inference comes after those it depends on.
std::vector<ExtractedRequest> extract_requests(const reason::Proof& proof, const std::vector<RestDescription>& rules);

struct WireBody {
  enum class Kind { EntityRef, Inline };
  Kind kind = Kind::Inline;
  std::string value;

  friend bool operator==(const WireBody&, const WireBody&) = default;
};

struct WireRequest {
  std::string method;
  std::string target;
  std::optional<WireBody> body;
  std::vector<std::pair<std::string, std::string>> headers;

  friend bool operator==(const WireRequest&, const WireRequest&) = default;
};

class NotSufficientlySpecified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexical method and target; an IRI body becomes an entity reference for the transport
/// to resolve. Header literals of the form "Name: value" become header fields.
WireRequest to_wire_request(const HttpRequestDescription& request);

}  // namespace pragproof::restdesc
