#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pragproof/agent/agent.hpp"
#include "pragproof/n3/parser.hpp"
#include "pragproof/reason/knowledge_base.hpp"
#include "pragproof/reason/prover.hpp"

namespace test_support {

inline std::string fixture_path(const std::string& relative) { return std::string(PRAGPROOF_FIXTURES) + "/" + relative; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_fixture(const std::string& relative) { return read_file(fixture_path(relative)); }

inline pragproof::n3::Document parse_fixture(const std::string& relative) {
  return pragproof::n3::parse_document(read_fixture(relative));
}

/// The image example: initial knowledge first, then the two descriptions.
inline pragproof::reason::KnowledgeBase image_kb() {
  pragproof::reason::KnowledgeBase kb;
  kb.add_source("agent_knowledge", parse_fixture("image/agent_knowledge.n3"));
  kb.add_source("desc_images", parse_fixture("image/descs/desc_images.n3"));
  kb.add_source("desc_thumbnail", parse_fixture("image/descs/desc_thumbnail.n3"));
  return kb;
}

inline pragproof::reason::FilterRule image_goal() {
  return pragproof::reason::FilterRule::from_document("agent_goal", parse_fixture("image/agent_goal.n3"));
}

inline std::map<std::string, pragproof::n3::Formula> image_sources() {
  auto sources = image_kb().source_formulas();
  sources.emplace("agent_goal", parse_fixture("image/agent_goal.n3").body);
  return sources;
}

inline pragproof::agent::CompositionProblem image_problem() {
  return pragproof::agent::make_problem({{"agent_knowledge", parse_fixture("image/agent_knowledge.n3")}}, image_goal(),
                                        {{"desc_images", parse_fixture("image/descs/desc_images.n3")},
                                         {"desc_thumbnail", parse_fixture("image/descs/desc_thumbnail.n3")}});
}

}  // namespace test_support
