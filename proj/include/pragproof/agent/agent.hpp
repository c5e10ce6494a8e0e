#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pragproof/agent/transport.hpp"
#include "pragproof/reason/knowledge_base.hpp"
#include "pragproof/reason/prover.hpp"
#include "pragproof/restdesc/description.hpp"

namespace pragproof::agent {

class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Initial state H, goal g, descriptions R and background knowledge B.
struct CompositionProblem {
  std::vector<reason::Source> state;
  reason::FilterRule goal;
  std::vector<restdesc::RestDescription> descriptions;
  std::vector<reason::Source> background;

  /// Throws InvalidProblem when H is not ground, the goal has nested formulas, B holds
  /// non-ground facts or rules with existentials or head-only universals, or two
  /// sources share an IRI.
  void validate() const;
};

/// Validates each description document and assembles a problem. Throws InvalidProblem
/// naming the first description with violations.
CompositionProblem make_problem(std::vector<reason::Source> state, reason::FilterRule goal,
                                const std::vector<reason::Source>& descriptions,
                                std::vector<reason::Source> background = {});

enum class Decision { Advance, Retire };
enum class OutcomeStatus { Success, Failure };

const char* to_string(Decision decision);
const char* to_string(OutcomeStatus status);

struct ExecutedStep {
  std::size_t epoch = 0;  // number of retirements before this step
  std::size_t n_pre = 0;
  restdesc::WireRequest request;
  bool sufficiently_specified = false;  // at selection time
  std::string rule;                     // description IRI
  std::string lemma;                    // name of the inference in the serialized pre-proof
  int response_status = 0;
  n3::Formula response;  // G
  std::size_t n_post = 0;
  Decision decision = Decision::Advance;
};

struct ExecutionOutcome {
  OutcomeStatus status = OutcomeStatus::Failure;
  n3::Formula goal_instance;  // Success only
  std::optional<reason::Proof> final_proof;
  std::vector<ExecutedStep> trace;
  std::set<std::string> retired;
  std::string cause;  // Failure only
  std::vector<std::string> warnings;
  std::size_t iteration_bound = 0;  // sum of each epoch's first n_pre
};

struct AgentOptions {
  reason::Budget budget;
  /// Keep responses from before a retirement instead of restarting from the original H.
  bool keep_learned = false;
};

struct SelectedRequest {
  restdesc::ExtractedRequest request;
  restdesc::WireRequest wire;
};

/// The first sufficiently specified request in dependency order, if any.
std::optional<SelectedRequest> select_request(const reason::Proof& pre_proof,
                                              const std::vector<restdesc::RestDescription>& rules);

/// Parses a response body into ground triples. Non-2xx statuses, other media types
/// and unparseable bodies give an empty formula; non-ground members are dropped.
/// Each degradation appends a message to `warnings`.
n3::Formula incorporate_response(const WireResponse& response, std::vector<std::string>& warnings);

/// Runs the pragmatic proof loop: prove, execute one sufficiently specified request,
/// re-prove with the response, then advance or retire the description.
ExecutionOutcome run(const CompositionProblem& problem, Transport& transport, const AgentOptions& options = {});

/// GET targets in the trace that occur neither in H nor in an earlier response.
std::vector<std::string> invented_targets(const CompositionProblem& problem, const ExecutionOutcome& outcome);

/// The outcome in N3, one resource per executed step.
std::string serialize_trace(const ExecutionOutcome& outcome);

}  // namespace pragproof::agent
