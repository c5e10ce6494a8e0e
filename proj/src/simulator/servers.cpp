#include "pragproof/simulator/servers.hpp"

#include <httplib.h>

#include <atomic>
#include <cctype>
#include <optional>
#include <sstream>

namespace pragproof::simulator {

bool FaultInjection::applies_to(const std::string& request_method) const {
  return fault != Fault::None && (method.empty() || method == request_method);
}

namespace {

agent::WireResponse not_found() { return {404, "text/plain", ""}; }

agent::WireResponse apply_fault(const FaultInjection& fault, const std::string& method, agent::WireResponse response) {
  if (!fault.applies_to(method)) return response;
  switch (fault.fault) {
    case Fault::DropBody:
      response.body.clear();
      break;
    case Fault::WrongTriples:
      response.body = "<urn:simulator:wrong> <urn:simulator:wrong> \"wrong\".\n";
      break;
    case Fault::ServerError:
      response = {500, "text/plain", ""};
      break;
    case Fault::None:
      break;
  }
  return response;
}

std::string expand(const std::string& tmpl, int id) {
  std::string out = tmpl;
  auto pos = out.find("{id}");
  if (pos != std::string::npos) out.replace(pos, 4, std::to_string(id));
  return out;
}

std::optional<int> match_template(const std::string& tmpl, const std::string& path) {
  auto pos = tmpl.find("{id}");
  if (pos == std::string::npos) return std::nullopt;
  std::string prefix = tmpl.substr(0, pos);
  std::string suffix = tmpl.substr(pos + 4);
  if (path.size() <= prefix.size() + suffix.size()) return std::nullopt;
  if (path.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0) return std::nullopt;
  std::string middle = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
  for (char c : middle)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  return std::stoi(middle);
}

bool safe_iri(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == '<' || c == '>' || c == '"' || c == ' ' || c == '\\' || c == '{' || c == '}' || static_cast<unsigned char>(c) < 0x20)
      return false;
  return true;
}

}  // namespace

ImageServer::ImageServer(ImageServerConfig config) : config_(std::move(config)), next_id_(config_.first_id) {}

agent::WireResponse ImageServer::send(const restdesc::WireRequest& request) {
  std::lock_guard lock(mutex_);
  log_.requests.push_back(request);
  return apply_fault(config_.fault, request.method, handle(request));
}

RequestLog ImageServer::log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

int ImageServer::next_id() const {
  std::lock_guard lock(mutex_);
  return next_id_;
}

agent::WireResponse ImageServer::handle(const restdesc::WireRequest& request) {
  const std::string image_prefix = "@prefix ex: <http://example.org/image#>.\n@prefix dbpedia: <http://dbpedia.org/resource/>.\n";
  auto links = [&](const std::string& subject, int id) {
    return "<" + subject + "> a dbpedia:Image;\n    ex:comments <" + expand(config_.comments_template, id) +
           ">;\n    ex:smallThumbnail <" + expand(config_.thumbnail_template, id) + ">.\n";
  };
  auto image_body = [&](int id) {
    std::string body = image_prefix + "\n" + links("/images/" + std::to_string(id), id);
    const std::string& entity = images_.at(id);
    if (safe_iri(entity)) body += links(entity, id);
    return body;
  };

  const std::string& path = request.target;
  if (request.method == "POST" && (path == "/images/" || path == "/images")) {
    std::string entity = request.body ? request.body->value : "";
    int id = next_id_++;
    images_[id] = entity;
    return {201, "text/n3", image_body(id)};
  }
  if (request.method != "GET") return not_found();

  if (auto id = match_template(config_.thumbnail_template, path); id && images_.count(*id)) {
    std::string thumb = expand(config_.thumbnail_template, *id);
    std::ostringstream body;
    body << "@prefix dbpedia: <http://dbpedia.org/resource/>.\n@prefix dbpedia-owl: <http://dbpedia.org/ontology/>.\n\n"
         << "</images/" << *id << "> dbpedia-owl:thumbnail <" << thumb << ">.\n";
    if (safe_iri(images_.at(*id))) body << "<" << images_.at(*id) << "> dbpedia-owl:thumbnail <" << thumb << ">.\n";
    body << "<" << thumb << "> a dbpedia:Image;\n    dbpedia-owl:height 80.0.\n";
    return {200, "text/n3", body.str()};
  }
  if (auto id = match_template(config_.comments_template, path); id && images_.count(*id)) {
    return {200, "text/n3",
            image_prefix + "\n</images/" + std::to_string(*id) + "> ex:comments <" + expand(config_.comments_template, *id) + ">.\n"};
  }
  if (auto id = match_template("/images/{id}", path); id && images_.count(*id)) return {200, "text/n3", image_body(*id)};
  return not_found();
}

ChainServer::ChainServer(benchmark::ChainSpec spec, FaultInjection fault) : spec_(spec), fault_(std::move(fault)) {
  spec_.validate();
}

agent::WireResponse ChainServer::send(const restdesc::WireRequest& request) {
  std::lock_guard lock(mutex_);
  log_.requests.push_back(request);
  return apply_fault(fault_, request.method, handle(request));
}

RequestLog ChainServer::log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

agent::WireResponse ChainServer::handle(const restdesc::WireRequest& request) const {
  if (request.method != "GET") return {405, "text/plain", ""};
  const std::string prefix = "/chain/";
  const std::string& path = request.target;
  if (path.compare(0, prefix.size(), prefix) != 0) return not_found();
  std::string rest = path.substr(prefix.size());
  auto slash = rest.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == rest.size()) return not_found();
  std::string level_text = rest.substr(0, slash), j_text = rest.substr(slash + 1);
  auto digits = [](const std::string& s) {
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return s.size() < 9;
  };
  if (!digits(level_text) || !digits(j_text)) return not_found();
  int level = std::stoi(level_text), j = std::stoi(j_text);
  if (level < 0 || level > spec_.n || j < 1 || j > spec_.d) return not_found();
  return {200, "text/n3", benchmark::chain_links(spec_.n, spec_.d, level + 1)};
}

struct HttpAdapter::Impl {
  agent::Transport& handler;
  httplib::Server server;
  std::atomic<std::size_t> served{0};
  std::size_t max_requests = 0;

  explicit Impl(agent::Transport& h) : handler(h) {}
};

HttpAdapter::HttpAdapter(agent::Transport& handler) : impl_(std::make_unique<Impl>(handler)) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    restdesc::WireRequest wire;
    wire.method = req.method;
    wire.target = req.path;
    if (req.has_header("Slug")) {
      wire.body = restdesc::WireBody{restdesc::WireBody::Kind::EntityRef, req.get_header_value("Slug")};
    } else if (!req.body.empty()) {
      wire.body = restdesc::WireBody{restdesc::WireBody::Kind::Inline, req.body};
    }
    agent::WireResponse response = impl_->handler.send(wire);
    res.status = response.status;
    res.set_content(response.body, response.media_type.empty() ? "text/plain" : response.media_type);
  };
  const char* any = ".*";
  impl_->server.Get(any, route);
  impl_->server.Post(any, route);
  impl_->server.Put(any, route);
  impl_->server.Patch(any, route);
  impl_->server.Delete(any, route);
  impl_->server.set_logger([this](const httplib::Request&, const httplib::Response&) {
    std::size_t n = ++impl_->served;
    if (impl_->max_requests != 0 && n >= impl_->max_requests) impl_->server.stop();
  });
}

HttpAdapter::~HttpAdapter() { stop(); }

int HttpAdapter::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) return -1;
  return port;
}

void HttpAdapter::serve(std::size_t max_requests) {
  impl_->max_requests = max_requests;
  impl_->server.listen_after_bind();
}

void HttpAdapter::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace pragproof::simulator
