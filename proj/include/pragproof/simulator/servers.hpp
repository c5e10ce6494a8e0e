#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pragproof/agent/transport.hpp"
#include "pragproof/benchmark/generator.hpp"

namespace pragproof::simulator {

enum class Fault { None, DropBody, WrongTriples, ServerError };

/// Corrupts matching responses. An empty method matches every method.
struct FaultInjection {
  Fault fault = Fault::None;
  std::string method;

  bool applies_to(const std::string& request_method) const;
};

/// Every request the server saw, for assertions on what the agent did.
struct RequestLog {
  std::vector<restdesc::WireRequest> requests;
};

struct ImageServerConfig {
  int first_id = 24;
  std::string comments_template = "/images/{id}/comments";
  std::string thumbnail_template = "/images/{id}/thumbnail";
  FaultInjection fault;
};

/// The image API: POST /images/ stores an entity and links to its comments and
/// thumbnail; GET on a thumbnail describes it as a small image.
///
/// Responses describe both the new resource `/images/{id}` and the uploaded entity,
/// so that clients holding only the entity reference can follow the links.
class ImageServer : public agent::Transport {
 public:
  explicit ImageServer(ImageServerConfig config = {});

  agent::WireResponse send(const restdesc::WireRequest& request) override;

  RequestLog log() const;
  int next_id() const;

 private:
  agent::WireResponse handle(const restdesc::WireRequest& request);

  ImageServerConfig config_;
  mutable std::mutex mutex_;
  int next_id_;
  std::map<int, std::string> images_;  // id to entity reference
  RequestLog log_;
};

/// Serves a generated chain: a GET on any resource of level i - 1 returns the d
/// `rel{i}` links that ground description i's precondition.
class ChainServer : public agent::Transport {
 public:
  explicit ChainServer(benchmark::ChainSpec spec, FaultInjection fault = {});

  agent::WireResponse send(const restdesc::WireRequest& request) override;

  RequestLog log() const;

 private:
  agent::WireResponse handle(const restdesc::WireRequest& request) const;

  benchmark::ChainSpec spec_;
  FaultInjection fault_;
  mutable std::mutex mutex_;
  RequestLog log_;
};

/// Binds a transport's handler to a socket. `max_requests` of 0 serves until stop().
class HttpAdapter {
 public:
  explicit HttpAdapter(agent::Transport& handler);
  ~HttpAdapter();

  /// Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop() or until `max_requests` have been answered.
  void serve(std::size_t max_requests = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pragproof::simulator
