#include "pragproof/benchmark/generator.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pragproof::benchmark {

void ChainSpec::validate() const {
  if (n < 2) throw std::invalid_argument("chain length n must be at least 2");
  if (d < 1) throw std::invalid_argument("dependency count d must be at least 1");
  if (dummies < 0) throw std::invalid_argument("dummy count must not be negative");
}

std::string chain_resource(int level, int j) { return "/chain/" + std::to_string(level) + "/" + std::to_string(j); }

namespace {

const char* kPrefixes =
    "@prefix ex: <http://example.org/bench#>.\n"
    "@prefix http: <http://www.w3.org/2011/http#>.\n\n";

std::string description(const std::string& family, int level, int d) {
  std::ostringstream out;
  out << kPrefixes << "{\n";
  for (int j = 1; j <= d; ++j) out << "  ?a" << j << " ex:" << family << level << " ?b" << j << ".\n";
  out << "}\n=>\n{\n"
      << "  _:request http:methodName \"GET\";\n"
      << "            http:requestURI ?b1;\n"
      << "            http:resp [ http:body ?b1 ].\n";
  for (int j = 1; j <= d; ++j) out << "  ?b" << j << " ex:" << family << level + 1 << " _:c" << j << ".\n";
  out << "}.\n";
  return out.str();
}

std::string goal(int level, int d) {
  std::ostringstream atoms;
  for (int j = 1; j <= d; ++j) atoms << "  ?a" << j << " ex:rel" << level << " ?b" << j << ".\n";
  return std::string(kPrefixes) + "{\n" + atoms.str() + "}\n=>\n{\n" + atoms.str() + "}.\n";
}

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

}  // namespace

std::string chain_links(int n, int d, int level) {
  if (level < 1 || level > n + 1) throw std::out_of_range("no such chain level");
  std::ostringstream out;
  out << "@prefix ex: <http://example.org/bench#>.\n\n";
  for (int j = 1; j <= d; ++j) {
    out << "<" << chain_resource(level - 1, j) << "> ex:rel" << level << " <" << chain_resource(level, j) << ">.\n";
  }
  return out.str();
}

GeneratedChain generate_chain(const ChainSpec& spec) {
  spec.validate();
  GeneratedChain out;
  out.spec = spec;
  int width = static_cast<int>(std::to_string(std::max(spec.n, spec.dummies)).size());
  for (int i = 1; i <= spec.n; ++i) {
    std::string name = "chain_" + padded(i, width);
    out.descriptions.push_back({name, description("rel", i, spec.d)});
    out.plan.push_back(name);
  }
  for (int k = 1; k <= spec.dummies; ++k) {
    out.descriptions.push_back({"dummy_" + padded(k, width), description("drel", k, spec.d)});
  }
  std::mt19937_64 rng(spec.seed);
  std::shuffle(out.descriptions.begin(), out.descriptions.end(), rng);
  out.initial_state = {"initial", chain_links(spec.n, spec.d, 1)};
  out.goal = {"goal", goal(spec.n + 1, spec.d)};
  return out;
}

}  // namespace pragproof::benchmark
