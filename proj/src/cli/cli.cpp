#include "pragproof/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "pragproof/agent/agent.hpp"
#include "pragproof/benchmark/harness.hpp"
#include "pragproof/descgen/descgen.hpp"
#include "pragproof/n3/parser.hpp"
#include "pragproof/n3/serializer.hpp"
#include "pragproof/reason/checker.hpp"
#include "pragproof/reason/proof_io.hpp"
#include "pragproof/simulator/servers.hpp"

namespace pragproof::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

n3::Document read_document(const fs::path& path) {
  std::string text = read_text(path);
  try {
    return n3::parse_document(text);
  } catch (const n3::ParseError& e) {
    throw n3::ParseError(e.line(), e.column(), path.filename().string() + ": " + e.what());
  }
}

std::vector<reason::Source> load_sources(const std::vector<std::string>& paths) {
  std::vector<reason::Source> out;
  for (const fs::path& p : expand_inputs(paths)) out.push_back({p.stem().string(), read_document(p)});
  return out;
}

void merge_prefixes(n3::PrefixMap& into, const n3::Document& doc) {
  for (const auto& [k, v] : doc.prefixes) into.emplace(k, v);
}

reason::Budget budget_from(std::optional<std::uint64_t> steps) {
  reason::Budget budget;
  if (const char* env = std::getenv("PRAGPROOF_BUDGET_STEPS"); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw UsageError("PRAGPROOF_BUDGET_STEPS must be a positive integer");
    budget.max_steps = v;
  }
  if (steps) {
    if (*steps == 0) throw UsageError("--budget-steps must be positive");
    budget.max_steps = *steps;
  }
  return budget;
}

benchmark::ChainSpec read_spec(const std::string& path) {
  auto grid = benchmark::parse_grid(read_text(path));
  if (grid.size() != 1) throw UsageError("chain spec " + path + " must describe exactly one chain");
  return grid.front();
}

std::string describe(const restdesc::WireRequest& r) {
  std::string s = r.method + " " + r.target;
  if (r.body) {
    s += r.body->kind == restdesc::WireBody::Kind::EntityRef ? " <" + r.body->value + ">" : " \"" + r.body->value + "\"";
  }
  return s;
}

// Subcommands.

struct ParseArgs {
  std::string file;
  bool expand = false;
};

int run_parse(const ParseArgs& a, std::ostream& out) {
  n3::SerializeOptions options;
  options.expand = a.expand;
  out << n3::serialize(read_document(a.file), options);
  return kOk;
}

struct ProveArgs {
  std::vector<std::string> data, rules;
  std::string goal;
  std::optional<std::uint64_t> budget_steps;
  bool elide = false;
};

int run_prove(const ProveArgs& a, std::ostream& out, std::ostream& err) {
  reason::Budget budget = budget_from(a.budget_steps);
  reason::KnowledgeBase kb;
  reason::ProofFormat format;
  format.elide_extractions = a.elide;
  for (auto& s : load_sources(a.data)) {
    merge_prefixes(format.prefixes, s.document);
    kb.add_source(s.iri, std::move(s.document));
  }
  for (auto& s : load_sources(a.rules)) {
    merge_prefixes(format.prefixes, s.document);
    kb.add_source(s.iri, std::move(s.document));
  }
  n3::Document goal_doc = read_document(a.goal);
  merge_prefixes(format.prefixes, goal_doc);
  auto filter = reason::FilterRule::from_document(fs::path(a.goal).stem().string(), goal_doc);
  auto result = reason::prove(kb, filter, budget);
  if (!result.proof) {
    err << reason::to_string(result.status) << ": " << result.message << "\n";
    return kDomainFailure;
  }
  out << reason::serialize_proof(*result.proof, format);
  return kOk;
}

struct CheckArgs {
  std::string proof;
  std::vector<std::string> sources;
};

int run_check(const CheckArgs& a, std::ostream& out) {
  std::map<std::string, n3::Formula> sources;
  for (auto& s : load_sources(a.sources)) sources.emplace(s.iri, std::move(s.document.body));
  reason::Proof proof = reason::parse_proof(read_text(a.proof), sources);
  auto violations = reason::check_proof(proof, sources);
  if (violations.empty()) {
    out << "valid\n";
    return kOk;
  }
  for (const auto& v : violations) out << reason::to_string(v) << "\n";
  return kDomainFailure;
}

int run_validate(const std::string& file, std::ostream& out) {
  n3::Document doc = read_document(file);
  restdesc::ValidationResult result;
  try {
    result = restdesc::validate_description(fs::path(file).stem().string(), doc);
  } catch (const std::invalid_argument& e) {
    out << e.what() << "\n";
    return kDomainFailure;
  }
  if (result.violations.empty()) {
    out << "valid\n";
    return kOk;
  }
  for (const auto& v : result.violations) out << restdesc::to_string(v) << "\n";
  return kDomainFailure;
}

struct RequestsArgs {
  std::string proof;
  std::vector<std::string> rules, sources;
};

int run_requests(const RequestsArgs& a, std::ostream& out) {
  std::map<std::string, n3::Formula> formulas;
  std::vector<restdesc::RestDescription> rules;
  for (auto& s : load_sources(a.rules)) {
    auto result = restdesc::validate_description(s.iri, s.document);
    if (!result.description) throw std::invalid_argument("description " + s.iri + ": " + to_string(result.violations.front()));
    rules.push_back(*result.description);
    formulas.emplace(s.iri, std::move(s.document.body));
  }
  for (auto& s : load_sources(a.sources)) formulas.emplace(s.iri, std::move(s.document.body));
  reason::Proof proof = reason::parse_proof(read_text(a.proof), formulas);
  auto names = reason::step_names(proof);
  std::size_t k = 0;
  for (const auto& r : restdesc::extract_requests(proof, rules)) {
    out << ++k << "\t" << r.rule_source << "\t" << names.at(r.step) << "\t";
    if (r.sufficiently_specified) {
      out << "ready\t" << describe(restdesc::to_wire_request(r.request));
    } else {
      out << "pending\t" << n3::serialize_term(r.request.method) << " " << n3::serialize_term(r.request.request_uri);
    }
    out << "\n";
  }
  return kOk;
}

struct ExecuteArgs {
  std::vector<std::string> data, rules, background;
  std::string goal, server, spec, trace, entity_dir = ".";
  bool keep_learned = false;
  std::optional<std::uint64_t> budget_steps;
};

int run_execute(const ExecuteArgs& a, std::ostream& out, std::ostream& err) {
  agent::AgentOptions options;
  options.budget = budget_from(a.budget_steps);
  options.keep_learned = a.keep_learned;
  n3::Document goal_doc = read_document(a.goal);
  auto problem = agent::make_problem(load_sources(a.data),
                                     reason::FilterRule::from_document(fs::path(a.goal).stem().string(), goal_doc),
                                     load_sources(a.rules), load_sources(a.background));

  std::unique_ptr<agent::Transport> transport;
  if (a.server == "simulator" || a.server == "simulator-image") {
    if (!a.spec.empty()) throw UsageError("--spec only applies to --server simulator-chain");
    transport = std::make_unique<simulator::ImageServer>();
  } else if (a.server == "simulator-chain") {
    if (a.spec.empty()) throw UsageError("--server simulator-chain needs --spec");
    transport = std::make_unique<simulator::ChainServer>(read_spec(a.spec));
  } else if (a.server.rfind("http://", 0) == 0) {
    transport = std::make_unique<agent::HttpTransport>(a.server, a.entity_dir);
  } else {
    throw UsageError("unknown server " + a.server);
  }

  auto outcome = agent::run(problem, *transport, options);
  for (const std::string& w : outcome.warnings) err << "warning: " << w << "\n";
  std::size_t k = 0;
  for (const auto& s : outcome.trace) {
    out << "step " << ++k << ": " << describe(s.request) << " status=" << s.response_status << " n_pre=" << s.n_pre
        << " n_post=" << s.n_post << " " << agent::to_string(s.decision) << " (" << s.rule << ")\n";
  }
  out << agent::to_string(outcome.status) << "\n";
  if (outcome.status == agent::OutcomeStatus::Success) {
    out << n3::serialize_statements(outcome.goal_instance, goal_doc.prefixes);
  } else {
    err << outcome.cause << "\n";
  }
  if (!a.trace.empty()) write_text(a.trace, agent::serialize_trace(outcome));
  return outcome.status == agent::OutcomeStatus::Success ? kOk : kDomainFailure;
}

struct ServeArgs {
  std::string api, spec, host = "127.0.0.1";
  int port = 8080;
  std::size_t max_requests = 0;
};

int run_serve(const ServeArgs& a, std::ostream& out) {
  std::unique_ptr<agent::Transport> handler;
  if (a.api == "image") {
    if (!a.spec.empty()) throw UsageError("--spec only applies to --api chain");
    handler = std::make_unique<simulator::ImageServer>();
  } else {
    if (a.spec.empty()) throw UsageError("--api chain needs --spec");
    handler = std::make_unique<simulator::ChainServer>(read_spec(a.spec));
  }
  simulator::HttpAdapter adapter(*handler);
  int port = adapter.bind(a.host, a.port);
  if (port <= 0) throw UsageError("cannot bind " + a.host + ":" + std::to_string(a.port));
  out << "listening on http://" << a.host << ":" << port << "\n" << std::flush;
  adapter.serve(a.max_requests);
  return kOk;
}

struct BenchgenArgs {
  benchmark::ChainSpec spec;
  std::string out;
};

int run_benchgen(const BenchgenArgs& a, std::ostream& out) {
  auto chain = benchmark::generate_chain(a.spec);
  fs::path dir(a.out);
  fs::create_directories(dir / "descs");
  for (const auto& d : chain.descriptions) write_text(dir / "descs" / (d.name + ".n3"), d.text);
  write_text(dir / (chain.initial_state.name + ".n3"), chain.initial_state.text);
  write_text(dir / (chain.goal.name + ".n3"), chain.goal.text);
  std::string plan;
  for (const auto& p : chain.plan) plan += p + "\n";
  write_text(dir / "plan.txt", plan);
  std::ostringstream spec;
  spec << "{\"n\": " << a.spec.n << ", \"d\": " << a.spec.d << ", \"dummies\": " << a.spec.dummies
       << ", \"seed\": " << a.spec.seed << "}\n";
  write_text(dir / "spec.json", spec.str());
  out << chain.descriptions.size() << " descriptions written to " << a.out << "\n";
  return kOk;
}

struct BenchArgs {
  std::string grid, csv;
  int trials = 5;
  std::optional<std::uint64_t> budget_steps;
};

int run_bench(const BenchArgs& a, std::ostream& out) {
  auto grid = benchmark::parse_grid(read_text(a.grid));
  auto records = benchmark::run_benchmark(grid, a.trials, budget_from(a.budget_steps));
  std::ofstream csv(a.csv);
  if (!csv) throw UsageError("cannot write " + a.csv);
  benchmark::write_csv(records, csv);
  bool all_ok = std::all_of(records.begin(), records.end(), [](const auto& r) { return r.ok; });
  for (const auto& s : benchmark::summarize(records)) {
    out << "n=" << s.spec.n << " d=" << s.spec.d << " dummies=" << s.spec.dummies << " reason_ms=" << s.mean_reason_ms
        << " sd=" << s.stddev_reason_ms << " total_ms=" << s.mean_total_ms << "\n";
  }
  return all_ok ? kOk : kDomainFailure;
}

struct DescgenArgs {
  std::string trace, out;
  double threshold = 0.6;
};

int run_descgen(const DescgenArgs& a, std::ostream& out) {
  auto trace = descgen::parse_trace(read_text(a.trace));
  auto clusters = descgen::cluster_responses(trace, a.threshold);
  auto skeletons = descgen::generate_skeletons(clusters, trace);
  fs::create_directories(a.out);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    std::string name = "skeleton_" + std::to_string(i + 1) + ".n3";
    write_text(fs::path(a.out) / name, descgen::to_n3(skeletons[i]));
    out << name << ": " << clusters[i].method << " " << clusters[i].uri_template << " <-";
    for (std::size_t m : clusters[i].members) out << " " << m + 1;
    out << "\n";
  }
  return kOk;
}

}  // namespace

std::vector<fs::path> expand_inputs(const std::vector<std::string>& paths) {
  std::vector<fs::path> out;
  for (const std::string& p : paths) {
    fs::path path(p);
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".n3") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else if (fs::is_regular_file(path)) {
      out.push_back(path);
    } else {
      throw UsageError("no such file or directory: " + p);
    }
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof-driven composition and execution of hypermedia APIs", "pragproof"};
  app.require_subcommand(1);

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Print the desugared form of an N3 document");
  parse->add_option("file", parse_args.file, "N3 file")->required();
  parse->add_flag("--expand", parse_args.expand, "One triple per statement");

  ProveArgs prove_args;
  auto* prove = app.add_subcommand("prove", "Prove a goal and print the proof");
  prove->add_option("--data", prove_args.data, "Fact files or directories")->required();
  prove->add_option("--rules", prove_args.rules, "Rule files or directories")->required();
  prove->add_option("--goal", prove_args.goal, "Filter rule file")->required();
  prove->add_option("--budget-steps", prove_args.budget_steps, "Maximum rule expansions");
  prove->add_flag("--elide-extractions", prove_args.elide, "Terse proof without inner extractions");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Check a proof against its sources");
  check->add_option("--proof", check_args.proof, "Proof file")->required();
  check->add_option("--sources", check_args.sources, "Source files or directories")->required();

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a description's syntactic conditions");
  validate->add_option("file", validate_file, "Description file")->required();

  RequestsArgs requests_args;
  auto* requests = app.add_subcommand("requests", "List the requests of a pre-proof in execution order");
  requests->add_option("--proof", requests_args.proof, "Proof file")->required();
  requests->add_option("--rules", requests_args.rules, "Description files or directories")->required();
  requests->add_option("--sources", requests_args.sources, "Other sources the proof parses");

  ExecuteArgs execute_args;
  auto* execute = app.add_subcommand("execute", "Run the pragmatic proof loop against a server");
  execute->add_option("--data", execute_args.data, "Initial state files or directories")->required();
  execute->add_option("--rules", execute_args.rules, "Description files or directories")->required();
  execute->add_option("--background", execute_args.background, "Background knowledge files or directories");
  execute->add_option("--goal", execute_args.goal, "Filter rule file")->required();
  execute->add_option("--server", execute_args.server, "simulator-image, simulator-chain or an http:// base URL")
      ->required();
  execute->add_option("--spec", execute_args.spec, "Chain spec JSON for simulator-chain");
  execute->add_option("--entity-dir", execute_args.entity_dir, "Directory holding uploaded entities");
  execute->add_flag("--keep-learned", execute_args.keep_learned, "Keep responses across retirements");
  execute->add_option("--budget-steps", execute_args.budget_steps, "Maximum rule expansions per proof");
  execute->add_option("--trace", execute_args.trace, "Write the execution trace as N3");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Serve a simulated API over HTTP");
  serve->add_option("--api", serve_args.api, "image or chain")->required()->check(CLI::IsMember({"image", "chain"}));
  serve->add_option("--spec", serve_args.spec, "Chain spec JSON");
  serve->add_option("--host", serve_args.host, "Interface to bind");
  serve->add_option("--port", serve_args.port, "Port, 0 for any")->check(CLI::Range(0, 65535));
  serve->add_option("--max-requests", serve_args.max_requests, "Stop after this many requests");

  BenchgenArgs benchgen_args;
  auto* benchgen = app.add_subcommand("benchgen", "Write a generated description chain");
  benchgen->add_option("--n", benchgen_args.spec.n, "Composition length")->required();
  benchgen->add_option("--d", benchgen_args.spec.d, "Dependencies per description")->required();
  benchgen->add_option("--dummies", benchgen_args.spec.dummies, "Descriptions that are never needed");
  benchgen->add_option("--seed", benchgen_args.spec.seed, "Shuffle seed");
  benchgen->add_option("--out", benchgen_args.out, "Output directory")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time parsing and reasoning over a grid of chains");
  bench->add_option("--grid", bench_args.grid, "Grid JSON")->required();
  bench->add_option("--trials", bench_args.trials, "Timed trials per spec")->check(CLI::PositiveNumber);
  bench->add_option("--csv", bench_args.csv, "CSV output file")->required();
  bench->add_option("--budget-steps", bench_args.budget_steps, "Maximum rule expansions per proof");

  DescgenArgs descgen_args;
  auto* descgen_cmd = app.add_subcommand("descgen", "Draft descriptions from an HTTP trace");
  descgen_cmd->add_option("--trace", descgen_args.trace, "Trace file")->required();
  descgen_cmd->add_option("--threshold", descgen_args.threshold, "Clustering similarity")->check(CLI::Range(0.0, 1.0));
  descgen_cmd->add_option("--out", descgen_args.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*parse) return run_parse(parse_args, out);
    if (*prove) return run_prove(prove_args, out, err);
    if (*check) return run_check(check_args, out);
    if (*validate) return run_validate(validate_file, out);
    if (*requests) return run_requests(requests_args, out);
    if (*execute) return run_execute(execute_args, out, err);
    if (*serve) return run_serve(serve_args, out);
    if (*benchgen) return run_benchgen(benchgen_args, out);
    if (*bench) return run_bench(bench_args, out);
    if (*descgen_cmd) return run_descgen(descgen_args, out);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kDomainFailure;
  }
  err << app.help();
  return kUsage;
}

}  // namespace pragproof::cli
