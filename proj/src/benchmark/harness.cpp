#include "pragproof/benchmark/harness.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>

#include "pragproof/n3/parser.hpp"

namespace pragproof::benchmark {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void load(reason::KnowledgeBase& kb, const GeneratedChain& chain) {
  kb.add_source(chain.initial_state.name, n3::parse_document(chain.initial_state.text));
  for (const NamedDocument& d : chain.descriptions) kb.add_source(d.name, n3::parse_document(d.text));
}

}  // namespace

reason::KnowledgeBase chain_kb(const GeneratedChain& chain) {
  reason::KnowledgeBase kb;
  load(kb, chain);
  return kb;
}

reason::FilterRule chain_goal(const GeneratedChain& chain) {
  return reason::FilterRule::from_document(chain.goal.name, n3::parse_document(chain.goal.text));
}

agent::CompositionProblem chain_problem(const GeneratedChain& chain) {
  std::vector<reason::Source> descriptions;
  for (const NamedDocument& d : chain.descriptions) descriptions.push_back({d.name, n3::parse_document(d.text)});
  return agent::make_problem({{chain.initial_state.name, n3::parse_document(chain.initial_state.text)}},
                             chain_goal(chain), descriptions);
}

std::set<std::string> description_names(const GeneratedChain& chain) {
  std::set<std::string> out;
  for (const NamedDocument& d : chain.descriptions) out.insert(d.name);
  return out;
}

std::vector<TimingRecord> run_benchmark(const std::vector<ChainSpec>& grid, int trials, const reason::Budget& budget) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  budget.validate();
  std::vector<TimingRecord> out;
  for (const ChainSpec& spec : grid) {
    GeneratedChain chain = generate_chain(spec);
    std::set<std::string> names = description_names(chain);
    for (int trial = 0; trial <= trials; ++trial) {
      TimingRecord record;
      record.spec = spec;
      record.trial = trial;
      auto start = Clock::now();
      reason::KnowledgeBase kb;
      load(kb, chain);
      reason::FilterRule goal = chain_goal(chain);
      record.parse_ms = ms_since(start);
      auto reason_start = Clock::now();
      reason::ProveResult result = reason::prove(kb, goal, budget);
      record.reason_ms = ms_since(reason_start);
      record.total_ms = record.parse_ms + record.reason_ms;
      record.status = reason::to_string(result.status);
      record.ok = result.proof.has_value();
      if (result.proof) record.n_pre = reason::count_rule_applications(*result.proof, names);
      if (trial > 0) out.push_back(std::move(record));
    }
  }
  return out;
}

std::vector<Summary> summarize(const std::vector<TimingRecord>& records) {
  std::vector<Summary> out;
  std::vector<std::vector<const TimingRecord*>> groups;
  auto same = [](const ChainSpec& a, const ChainSpec& b) {
    return a.n == b.n && a.d == b.d && a.dummies == b.dummies && a.seed == b.seed;
  };
  for (const TimingRecord& r : records) {
    if (out.empty() || !same(out.back().spec, r.spec)) {
      out.push_back({r.spec, 0, 0, 0});
      groups.emplace_back();
    }
    groups.back().push_back(&r);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0, total = 0;
    for (const TimingRecord* r : groups[i]) {
      sum += r->reason_ms;
      total += r->total_ms;
    }
    double k = static_cast<double>(groups[i].size());
    out[i].mean_reason_ms = sum / k;
    out[i].mean_total_ms = total / k;
    double sq = 0;
    for (const TimingRecord* r : groups[i]) sq += (r->reason_ms - out[i].mean_reason_ms) * (r->reason_ms - out[i].mean_reason_ms);
    out[i].stddev_reason_ms = k > 1 ? std::sqrt(sq / (k - 1)) : 0;
  }
  return out;
}

void write_csv(const std::vector<TimingRecord>& records, std::ostream& out) {
  out << "n,d,dummies,trial,parse_ms,reason_ms,total_ms,n_pre\n";
  out << std::fixed << std::setprecision(3);
  for (const TimingRecord& r : records) {
    out << r.spec.n << ',' << r.spec.d << ',' << r.spec.dummies << ',' << r.trial << ',' << r.parse_ms << ','
        << r.reason_ms << ',' << r.total_ms << ',';
    if (r.ok) out << r.n_pre;
    out << '\n';
  }
}

namespace {

std::vector<int> ints(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return {fallback};
  const auto& v = j.at(key);
  if (v.is_number_integer()) return {v.get<int>()};
  if (!v.is_array() || v.empty()) throw std::invalid_argument(std::string("grid member ") + key + " must be an integer or a nonempty array");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw std::invalid_argument(std::string("grid member ") + key + " must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::vector<ChainSpec> parse_grid(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("grid is not JSON: ") + e.what());
  }
  std::vector<ChainSpec> out;
  auto seed_of = [](const nlohmann::json& o) -> std::uint64_t {
    if (!o.contains("seed")) return 0;
    if (!o.at("seed").is_number_unsigned()) throw std::invalid_argument("grid seed must be a non-negative integer");
    return o.at("seed").get<std::uint64_t>();
  };
  if (j.is_array()) {
    for (const auto& o : j) {
      if (!o.is_object()) throw std::invalid_argument("grid entries must be objects");
      ChainSpec s;
      s.n = ints(o, "n", 2).front();
      s.d = ints(o, "d", 1).front();
      s.dummies = ints(o, "dummies", 0).front();
      s.seed = seed_of(o);
      s.validate();
      out.push_back(s);
    }
  } else if (j.is_object()) {
    std::uint64_t seed = seed_of(j);
    for (int n : ints(j, "n", 2))
      for (int d : ints(j, "d", 1))
        for (int dummies : ints(j, "dummies", 0)) {
          ChainSpec s{n, d, dummies, seed};
          s.validate();
          out.push_back(s);
        }
  } else {
    throw std::invalid_argument("grid must be a JSON array or object");
  }
  if (out.empty()) throw std::invalid_argument("grid is empty");
  return out;
}

}  // namespace pragproof::benchmark
