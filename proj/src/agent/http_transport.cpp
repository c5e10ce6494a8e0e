#include <httplib.h>

#include <fstream>
#include <sstream>

#include "pragproof/agent/transport.hpp"

namespace pragproof::agent {

struct HttpTransport::Impl {
  httplib::Client client;
  std::filesystem::path entity_dir;

  Impl(const std::string& base_url, std::filesystem::path dir) : client(base_url), entity_dir(std::move(dir)) {}
};

HttpTransport::HttpTransport(std::string base_url, std::filesystem::path entity_dir)
    : impl_(std::make_unique<Impl>(base_url, std::move(entity_dir))) {
  impl_->client.set_connection_timeout(5);
  impl_->client.set_read_timeout(30);
}

HttpTransport::~HttpTransport() = default;

WireResponse HttpTransport::send(const restdesc::WireRequest& request) {
  httplib::Headers headers{{"Accept", "text/n3, text/turtle"}};
  for (const auto& [name, value] : request.headers)
    if (!name.empty()) headers.emplace(name, value);

  std::string body;
  std::string content_type = "text/n3";
  if (request.body) {
    if (request.body->kind == restdesc::WireBody::Kind::EntityRef) {
      headers.emplace("Slug", request.body->value);
      std::filesystem::path file = impl_->entity_dir / request.body->value;
      std::ifstream in(file, std::ios::binary);
      if (in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        body = ss.str();
        content_type = "application/octet-stream";
      }
    } else {
      body = request.body->value;
    }
  }

  httplib::Result result = [&] {
    const std::string& m = request.method;
    if (m == "GET") return impl_->client.Get(request.target, headers);
    if (m == "HEAD") return impl_->client.Head(request.target, headers);
    if (m == "DELETE") return impl_->client.Delete(request.target, headers, body, content_type);
    if (m == "PUT") return impl_->client.Put(request.target, headers, body, content_type);
    if (m == "PATCH") return impl_->client.Patch(request.target, headers, body, content_type);
    return impl_->client.Post(request.target, headers, body, content_type);
  }();

  WireResponse out;
  if (!result) {
    out.status = 0;
    out.media_type.clear();
    return out;
  }
  out.status = result->status;
  out.media_type = result->get_header_value("Content-Type");
  out.body = result->body;
  return out;
}

}  // namespace pragproof::agent
