#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "pragproof/restdesc/description.hpp"

namespace pragproof::agent {

struct WireResponse {
  int status = 200;
  std::string media_type = "text/n3";
  std::string body;
};

/// Executes one request at a time on behalf of the agent.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual WireResponse send(const restdesc::WireRequest& request) = 0;
};

/// Sends requests to a real server. Entity-reference bodies are read from
/// `entity_dir` when such a file exists and are named in a `Slug` header.
/// Connection failures come back as status 0 with an empty body.
class HttpTransport : public Transport {
 public:
  HttpTransport(std::string base_url, std::filesystem::path entity_dir = ".");
  ~HttpTransport() override;

  WireResponse send(const restdesc::WireRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pragproof::agent
