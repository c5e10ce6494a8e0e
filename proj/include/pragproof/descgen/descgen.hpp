#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pragproof/agent/transport.hpp"
#include "pragproof/n3/serializer.hpp"
#include "pragproof/n3/term.hpp"
#include "pragproof/restdesc/description.hpp"

namespace pragproof::descgen {

inline constexpr const char* kDescgenNs = "http://example.org/descgen#";

struct TraceEntry {
  restdesc::WireRequest request;
  agent::WireResponse response;
};

/// Reads the delimited trace format:
///
///     >>> POST /images/ <image1.jpg>
///     <<< 201 text/n3
///     ...response body...
///
/// A request line may end in `<ref>` (entity reference) or `"text"` (inline body).
/// Lines before the first request starting with `#` are comments.
/// Throws std::invalid_argument on malformed structure.
std::vector<TraceEntry> parse_trace(std::string_view text);
std::string write_trace(const std::vector<TraceEntry>& trace);

/// Sorted full-IRI triples of a body, or the raw body when it does not parse.
std::string canonical_body(const std::string& body);

std::size_t levenshtein(std::string_view a, std::string_view b);
/// 1 - distance / max length; 1 for two empty strings.
double similarity(std::string_view a, std::string_view b);

struct Cluster {
  std::vector<std::size_t> members;  // trace indices, ascending
  std::string method;
  std::string uri_template;  // target with varying path segments as {}
};

/// Single-linkage clustering: entries with the same method are joined when the
/// similarity of their canonical bodies reaches `threshold`. Clusters are ordered by
/// their first member. Throws std::invalid_argument on an empty trace or a threshold
/// outside [0, 1].
std::vector<Cluster> cluster_responses(const std::vector<TraceEntry>& trace, double threshold = 0.6);

struct GeneralizedTerm {
  n3::Term variable;
  std::vector<n3::Term> values;  // one per cluster member
};

struct Skeleton {
  std::size_t cluster = 0;
  n3::Implication rule;
  n3::PrefixMap prefixes;
  std::vector<GeneralizedTerm> generalized;
};

class EmptyCluster : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SkeletonOptions {
  /// Lift patterns from earlier responses that mention the request URIs.
  bool link = true;
};

std::vector<Skeleton> generate_skeletons(const std::vector<Cluster>& clusters, const std::vector<TraceEntry>& trace,
                                         const SkeletonOptions& options = {});

std::string to_n3(const Skeleton& skeleton);

}  // namespace pragproof::descgen
