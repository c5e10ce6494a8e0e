#include "pragproof/descgen/descgen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "pragproof/n3/algebra.hpp"
#include "pragproof/n3/parser.hpp"

namespace pragproof::descgen {

namespace {

constexpr const char* kHttp = "http://www.w3.org/2011/http#";

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

restdesc::WireRequest parse_request_line(const std::string& line, std::size_t number) {
  auto fail = [&](const std::string& why) {
    return std::invalid_argument("trace line " + std::to_string(number) + ": " + why);
  };
  std::string rest = trim(std::string_view(line).substr(4));
  auto sp = rest.find(' ');
  if (sp == std::string::npos) throw fail("request line needs a method and a target");
  restdesc::WireRequest request;
  request.method = rest.substr(0, sp);
  rest = trim(std::string_view(rest).substr(sp + 1));
  sp = rest.find(' ');
  request.target = rest.substr(0, sp);
  if (request.target.empty()) throw fail("missing request target");
  std::string body = sp == std::string::npos ? "" : trim(std::string_view(rest).substr(sp + 1));
  if (body.empty()) return request;
  if (body.size() >= 2 && body.front() == '<' && body.back() == '>') {
    request.body = restdesc::WireBody{restdesc::WireBody::Kind::EntityRef, body.substr(1, body.size() - 2)};
  } else if (body.size() >= 2 && body.front() == '"' && body.back() == '"') {
    std::string value;
    for (std::size_t i = 1; i + 1 < body.size(); ++i) {
      if (body[i] == '\\' && i + 2 < body.size()) ++i;
      value += body[i];
    }
    request.body = restdesc::WireBody{restdesc::WireBody::Kind::Inline, value};
  } else {
    throw fail("request body must be <ref> or \"text\"");
  }
  return request;
}

}  // namespace

std::vector<TraceEntry> parse_trace(std::string_view text) {
  std::vector<TraceEntry> out;
  auto lines = split_lines(text);
  std::size_t i = 0;
  for (; i < lines.size() && lines[i].rfind(">>> ", 0) != 0; ++i) {
    std::string t = trim(lines[i]);
    if (!t.empty() && t[0] != '#') throw std::invalid_argument("trace line " + std::to_string(i + 1) + ": expected a request");
  }
  while (i < lines.size()) {
    TraceEntry entry;
    entry.request = parse_request_line(lines[i], i + 1);
    ++i;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i >= lines.size() || lines[i].rfind("<<< ", 0) != 0) {
      throw std::invalid_argument("trace line " + std::to_string(i + 1) + ": expected a response line");
    }
    std::istringstream status_line(lines[i].substr(4));
    if (!(status_line >> entry.response.status)) {
      throw std::invalid_argument("trace line " + std::to_string(i + 1) + ": response status must be a number");
    }
    std::string media;
    if (status_line >> media) entry.response.media_type = media;
    ++i;
    std::vector<std::string> body;
    for (; i < lines.size() && lines[i].rfind(">>> ", 0) != 0; ++i) body.push_back(lines[i]);
    while (!body.empty() && trim(body.back()).empty()) body.pop_back();
    for (const std::string& l : body) entry.response.body += l + "\n";
    out.push_back(std::move(entry));
  }
  return out;
}

std::string write_trace(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  for (const TraceEntry& e : trace) {
    out << ">>> " << e.request.method << ' ' << e.request.target;
    if (e.request.body) {
      if (e.request.body->kind == restdesc::WireBody::Kind::EntityRef) {
        out << " <" << e.request.body->value << '>';
      } else {
        out << " \"";
        for (char c : e.request.body->value) {
          if (c == '"' || c == '\\') out << '\\';
          out << c;
        }
        out << '"';
      }
    }
    out << "\n<<< " << e.response.status << ' ' << e.response.media_type << '\n' << e.response.body;
    if (!e.response.body.empty() && e.response.body.back() != '\n') out << '\n';
    out << '\n';
  }
  return out.str();
}

std::string canonical_body(const std::string& body) {
  n3::Document doc;
  try {
    doc = n3::parse_document(body);
  } catch (const n3::ParseError&) {
    return body;
  }
  std::vector<std::string> lines;
  for (const n3::Triple& t : doc.body.atoms) {
    lines.push_back(n3::serialize_term(t.subject) + " " + n3::serialize_term(t.predicate) + " " +
                    n3::serialize_term(t.object) + " .");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double similarity(std::string_view a, std::string_view b) {
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

namespace {

std::string uri_template(const std::vector<TraceEntry>& trace, const std::vector<std::size_t>& members) {
  auto segments = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto slash = s.find('/', start);
      out.push_back(s.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
      if (slash == std::string::npos) break;
      start = slash + 1;
    }
    return out;
  };
  auto first = segments(trace[members.front()].request.target);
  for (std::size_t m : members) {
    auto other = segments(trace[m].request.target);
    if (other.size() != first.size()) return trace[members.front()].request.target;
    for (std::size_t k = 0; k < first.size(); ++k)
      if (other[k] != first[k]) first[k] = "{}";
  }
  std::string out;
  for (std::size_t k = 0; k < first.size(); ++k) out += (k ? "/" : "") + first[k];
  return out;
}

}  // namespace

std::vector<Cluster> cluster_responses(const std::vector<TraceEntry>& trace, double threshold) {
  if (trace.empty()) throw std::invalid_argument("trace is empty");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
  std::vector<std::string> canon;
  for (const TraceEntry& e : trace) canon.push_back(canonical_body(e.response.body));
  std::vector<std::size_t> parent(trace.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < trace.size(); ++i)
    for (std::size_t j = i + 1; j < trace.size(); ++j) {
      if (trace[i].request.method != trace[j].request.method) continue;
      if (find(i) == find(j)) continue;
      if (similarity(canon[i], canon[j]) >= threshold) parent[find(j)] = find(i);
    }
  std::map<std::size_t, std::size_t> index_of_root;
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::size_t root = find(i);
    auto [it, inserted] = index_of_root.try_emplace(root, out.size());
    if (inserted) out.push_back({{}, trace[i].request.method, ""});
    out[it->second].members.push_back(i);
  }
  for (Cluster& c : out) c.uri_template = uri_template(trace, c.members);
  return out;
}

namespace {

n3::Term http(const std::string& local) { return n3::Term::uri(std::string(kHttp) + local); }

class Generalizer {
 public:
  n3::Term term(const std::vector<n3::Term>& values) {
    if (std::all_of(values.begin(), values.end(), [&](const n3::Term& v) { return v == values.front(); })) {
      return values.front();
    }
    auto [it, inserted] = vars_.try_emplace(values, n3::Term::existential("object" + std::to_string(vars_.size() + 1)));
    if (inserted) order_.push_back({it->second, values});
    return it->second;
  }

  std::optional<n3::Term> known(const std::vector<n3::Term>& values) const {
    auto it = vars_.find(values);
    if (it == vars_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<GeneralizedTerm>& generalized() const { return order_; }

 private:
  std::map<std::vector<n3::Term>, n3::Term> vars_;
  std::vector<GeneralizedTerm> order_;
};

n3::Formula parse_or_empty(const std::string& body, n3::PrefixMap& prefixes) {
  try {
    n3::Document doc = n3::parse_document(body);
    for (const auto& [k, v] : doc.prefixes) prefixes.emplace(k, v);
    n3::Formula ground;
    for (const n3::Triple& t : doc.body.atoms)
      if (t.subject.ground() && t.predicate.ground() && t.object.ground()) ground.atoms.push_back(t);
    return ground;
  } catch (const n3::ParseError&) {
    return {};
  }
}

std::optional<n3::Term> main_subject(const n3::Formula& f) {
  std::map<n3::Term, std::size_t> counts;
  std::optional<n3::Term> best;
  std::size_t best_count = 0;
  for (const n3::Triple& t : f.atoms) ++counts[t.subject];
  for (const n3::Triple& t : f.atoms) {
    if (counts[t.subject] > best_count) {
      best = t.subject;
      best_count = counts[t.subject];
    }
  }
  return best;
}

// Triples of the first member with a same-predicate counterpart in every other member.
std::vector<std::vector<n3::Triple>> align(const std::vector<n3::Formula>& bodies) {
  std::vector<std::vector<n3::Triple>> out;
  std::vector<std::vector<bool>> used(bodies.size());
  for (std::size_t m = 0; m < bodies.size(); ++m) used[m].assign(bodies[m].atoms.size(), false);
  for (const n3::Triple& t : bodies.front().atoms) {
    std::vector<n3::Triple> row{t};
    std::vector<std::size_t> picks;
    for (std::size_t m = 1; m < bodies.size(); ++m) {
      std::optional<std::size_t> pick;
      int best = -1;
      for (std::size_t k = 0; k < bodies[m].atoms.size(); ++k) {
        const n3::Triple& c = bodies[m].atoms[k];
        if (used[m][k] || c.predicate != t.predicate) continue;
        int score = (c.subject == t.subject) + (c.object == t.object);
        if (score > best) {
          best = score;
          pick = k;
        }
      }
      if (!pick) break;
      picks.push_back(*pick);
      row.push_back(bodies[m].atoms[*pick]);
    }
    if (row.size() != bodies.size()) continue;
    for (std::size_t m = 1; m < bodies.size(); ++m) used[m][picks[m - 1]] = true;
    out.push_back(std::move(row));
  }
  return out;
}

n3::Term request_uri_value(const std::string& target) { return n3::Term::uri(target); }

// The latest triple of an earlier response mentioning `value`, with the position it occupies.
std::optional<std::pair<n3::Triple, int>> earlier_mention(const std::vector<n3::Formula>& responses, std::size_t before,
                                                          const n3::Term& value) {
  for (std::size_t i = before; i-- > 0;) {
    for (const n3::Triple& t : responses[i].atoms) {
      if (t.object == value) return std::make_pair(t, 2);
      if (t.subject == value) return std::make_pair(t, 0);
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Skeleton> generate_skeletons(const std::vector<Cluster>& clusters, const std::vector<TraceEntry>& trace,
                                         const SkeletonOptions& options) {
  n3::PrefixMap prefixes{{"http", kHttp}};
  std::vector<n3::Formula> responses;
  for (const TraceEntry& e : trace) responses.push_back(parse_or_empty(e.response.body, prefixes));

  std::vector<Skeleton> out;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cluster = clusters[c];
    if (cluster.members.empty()) throw EmptyCluster("cluster " + std::to_string(c) + " has no members");
    for (std::size_t m : cluster.members)
      if (m >= trace.size()) throw std::out_of_range("cluster member outside the trace");
    Generalizer gen;
    auto column = [&](auto&& f) {
      std::vector<n3::Term> values;
      for (std::size_t m : cluster.members) values.push_back(f(trace[m]));
      return values;
    };
    n3::Formula antecedent, consequent;
    bool uses_local = false;

    n3::Term request = n3::Term::existential("request");
    n3::Term method = gen.term(column([](const TraceEntry& e) { return n3::Term::literal(e.request.method); }));
    consequent.atoms.push_back({request, http("methodName"), method});

    auto uris = column([](const TraceEntry& e) { return request_uri_value(e.request.target); });
    n3::Term uri = gen.term(uris);
    if (!uri.is_variable()) uri = n3::Term::literal(trace[cluster.members.front()].request.target);
    consequent.atoms.push_back({request, http("requestURI"), uri});

    bool has_body = std::all_of(cluster.members.begin(), cluster.members.end(),
                                [&](std::size_t m) { return trace[m].request.body.has_value(); });
    if (has_body) {
      auto bodies = column([](const TraceEntry& e) {
        return e.request.body->kind == restdesc::WireBody::Kind::EntityRef ? n3::Term::uri(e.request.body->value)
                                                                           : n3::Term::literal(e.request.body->value);
      });
      n3::Term body = gen.term(bodies);
      consequent.atoms.push_back({request, http("body"), body});
      if (body.is_variable()) {
        bool entity = trace[cluster.members.front()].request.body->kind == restdesc::WireBody::Kind::EntityRef;
        antecedent.atoms.push_back({body, n3::Term::uri(n3::vocab::kRdfType),
                                    n3::Term::uri(std::string(kDescgenNs) + (entity ? "localFile" : "inputValue"))});
        uses_local = true;
      }
    }

    std::vector<n3::Formula> member_bodies;
    for (std::size_t m : cluster.members) member_bodies.push_back(responses[m]);
    std::optional<n3::Term> response_body;
    if (cluster.method == "GET") {
      response_body = uri.is_variable() ? uri : uris.front();
    } else {
      std::vector<n3::Term> subjects;
      for (const n3::Formula& f : member_bodies) {
        auto s = main_subject(f);
        if (!s) break;
        subjects.push_back(*s);
      }
      if (subjects.size() == member_bodies.size()) response_body = gen.term(subjects);
    }
    if (response_body) {
      n3::Term response = n3::Term::existential("response");
      consequent.atoms.push_back({request, http("resp"), response});
      consequent.atoms.push_back({response, http("body"), *response_body});
    }

    for (const auto& row : align(member_bodies)) {
      std::vector<n3::Term> s, p, o;
      for (const n3::Triple& t : row) {
        s.push_back(t.subject);
        p.push_back(t.predicate);
        o.push_back(t.object);
      }
      consequent.atoms.push_back({gen.term(s), gen.term(p), gen.term(o)});
    }

    if (options.link && uri.is_variable()) {
      std::vector<n3::Triple> found;
      std::optional<int> position;
      for (std::size_t k = 0; k < cluster.members.size(); ++k) {
        auto hit = earlier_mention(responses, cluster.members[k], uris[k]);
        if (!hit || (position && *position != hit->second)) break;
        position = hit->second;
        found.push_back(hit->first);
      }
      if (found.size() == cluster.members.size()) {
        std::vector<n3::Term> s, p, o;
        for (const n3::Triple& t : found) {
          s.push_back(t.subject);
          p.push_back(t.predicate);
          o.push_back(t.object);
        }
        antecedent.atoms.push_back({gen.term(s), gen.term(p), gen.term(o)});
      }
    }

    n3::Substitution universal;
    for (const n3::Term& v : n3::variables(antecedent))
      if (v.is_existential()) universal.bind(v, n3::Term::universal(v.text()));
    antecedent = n3::apply_substitution(antecedent, universal, n3::ApplyMode::Total);
    consequent = n3::apply_substitution(consequent, universal, n3::ApplyMode::Total);

    Skeleton skeleton;
    skeleton.cluster = c;
    skeleton.rule = {n3::Term::graph(antecedent), n3::Term::graph(consequent)};
    skeleton.prefixes = prefixes;
    if (uses_local) skeleton.prefixes[""] = kDescgenNs;
    for (GeneralizedTerm g : gen.generalized()) {
      g.variable = n3::apply_substitution(g.variable, universal, n3::ApplyMode::Total);
      skeleton.generalized.push_back(std::move(g));
    }
    out.push_back(std::move(skeleton));
  }
  return out;
}

std::string to_n3(const Skeleton& skeleton) {
  return n3::serialize(n3::Document{skeleton.prefixes, n3::Formula({}, {skeleton.rule}), std::nullopt});
}

}  // namespace pragproof::descgen
