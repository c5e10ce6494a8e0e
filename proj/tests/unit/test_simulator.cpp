#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "pragproof/n3/parser.hpp"
#include "pragproof/simulator/servers.hpp"
#include "support.hpp"

using namespace pragproof;
using namespace pragproof::simulator;
using restdesc::WireBody;
using restdesc::WireRequest;

namespace {

WireRequest upload(const std::string& entity) {
  return {"POST", "/images/", WireBody{WireBody::Kind::EntityRef, entity}, {}};
}

WireRequest get(const std::string& target) { return {"GET", target, std::nullopt, {}}; }

n3::Formula body_of(const agent::WireResponse& r) { return n3::parse_formula(r.body); }

n3::Triple triple(const std::string& s, const std::string& p, const n3::Term& o) {
  return {n3::Term::uri(s), n3::Term::uri(p), o};
}

const std::string kEx = "http://example.org/image#";
const std::string kOwl = "http://dbpedia.org/ontology/";

}  // namespace

TEST_CASE("first upload is image 24 with its thumbnail link") {
  ImageServer server;
  auto r = server.send(upload("image1.jpg"));
  CHECK(r.status == 201);
  CHECK(r.media_type == "text/n3");
  n3::Formula g = body_of(r);
  CHECK(g.contains(triple("/images/24", kEx + "smallThumbnail", n3::Term::uri("/images/24/thumbnail"))));
  CHECK(g.contains(triple("/images/24", kEx + "comments", n3::Term::uri("/images/24/comments"))));
  CHECK(g.contains(triple("image1.jpg", kEx + "smallThumbnail", n3::Term::uri("/images/24/thumbnail"))));
  CHECK(server.next_id() == 25);
}

TEST_CASE("thumbnail GET describes a small image") {
  ImageServer server;
  server.send(upload("image1.jpg"));
  auto r = server.send(get("/images/24/thumbnail"));
  CHECK(r.status == 200);
  n3::Formula g = body_of(r);
  CHECK(g.contains(triple("/images/24/thumbnail", kOwl + "height", n3::Term::literal("80.0", n3::vocab::kXsdDecimal))));
  CHECK(g.contains(triple("image1.jpg", kOwl + "thumbnail", n3::Term::uri("/images/24/thumbnail"))));
  CHECK(g.contains(triple("/images/24/thumbnail", n3::vocab::kRdfType, n3::Term::uri("http://dbpedia.org/resource/Image"))));
}

TEST_CASE("unknown resources are 404 with an empty body") {
  ImageServer server;
  auto r = server.send(get("/nonexistent"));
  CHECK(r.status == 404);
  CHECK(r.body.empty());
  CHECK(server.send(get("/images/24/thumbnail")).status == 404);
  CHECK(server.log().requests.size() == 2);
}

TEST_CASE("ids increase per upload and link templates are configurable") {
  ImageServerConfig config;
  config.first_id = 37;
  config.comments_template = "/comments/about/images/{id}";
  config.thumbnail_template = "/images/{id}/thumb/";
  ImageServer server(config);
  n3::Formula g = body_of(server.send(upload("lena.jpg")));
  CHECK(g.contains(triple("lena.jpg", kEx + "comments", n3::Term::uri("/comments/about/images/37"))));
  CHECK(g.contains(triple("lena.jpg", kEx + "smallThumbnail", n3::Term::uri("/images/37/thumb/"))));
  CHECK(server.send(get("/images/37/thumb/")).status == 200);
  server.send(upload("other.jpg"));
  CHECK(server.next_id() == 39);
}

TEST_CASE("faults apply only where configured") {
  ImageServerConfig config;
  config.fault = {Fault::DropBody, "POST"};
  ImageServer dropping(config);
  auto r = dropping.send(upload("a.jpg"));
  CHECK(r.status == 201);
  CHECK(r.body.empty());
  CHECK_FALSE(dropping.send(get("/images/24/thumbnail")).body.empty());

  config.fault = {Fault::ServerError, ""};
  CHECK(ImageServer(config).send(upload("a.jpg")).status == 500);

  config.fault = {Fault::WrongTriples, "POST"};
  n3::Formula g = body_of(ImageServer(config).send(upload("a.jpg")));
  CHECK(g.atoms.size() == 1);
  CHECK_FALSE(g.contains(triple("a.jpg", kEx + "smallThumbnail", n3::Term::uri("/images/24/thumbnail"))));
}

TEST_CASE("chain head GET returns d next-level links") {
  benchmark::ChainSpec spec{3, 2, 0, 1};
  ChainServer server(spec);
  auto r = server.send(get("/chain/1/1"));
  CHECK(r.status == 200);
  n3::Formula g = body_of(r);
  REQUIRE(g.atoms.size() == 2);
  for (const n3::Triple& t : g.atoms) CHECK(t.predicate == n3::Term::uri(std::string(benchmark::kBenchNs) + "rel2"));
}

TEST_CASE("terminal chain GET satisfies the goal filter") {
  benchmark::ChainSpec spec{3, 2, 0, 1};
  auto chain = benchmark::generate_chain(spec);
  ChainServer server(spec);
  auto r = server.send(get("/chain/3/2"));
  REQUIRE(r.status == 200);
  reason::KnowledgeBase kb;
  kb.add_source("response", n3::parse_document(r.body));
  auto result = reason::prove(kb, reason::FilterRule::from_document("goal", n3::parse_document(chain.goal.text)));
  CHECK(result.status == reason::ProveStatus::Proved);
}

TEST_CASE("off-chain and non-GET chain requests fail") {
  ChainServer server({3, 2, 0, 1});
  CHECK(server.send(get("/chain/4/1")).status == 404);
  CHECK(server.send(get("/chain/1/3")).status == 404);
  CHECK(server.send(get("/elsewhere")).status == 404);
  CHECK(server.send({"POST", "/chain/1/1", std::nullopt, {}}).status == 405);
}

TEST_CASE("image responses entail each described postcondition") {
  auto problem = test_support::image_problem();
  ImageServer server;
  auto posted = server.send(upload("lena.jpg"));
  reason::KnowledgeBase kb;
  kb.add_source("response_1", n3::parse_document(posted.body));
  auto post_filter = reason::FilterRule::from_document(
      "g", n3::parse_document("@prefix ex: <http://example.org/image#>.\n"
                              "{ <lena.jpg> ex:comments ?c; ex:smallThumbnail ?t } => { <lena.jpg> ex:comments ?c; ex:smallThumbnail ?t }."));
  auto first = reason::prove(kb, post_filter);
  REQUIRE(first.status == reason::ProveStatus::Proved);
  n3::Term thumb = first.proof->conclusion().atoms.back().object;
  REQUIRE(thumb.is_uri());

  auto fetched = server.send(get(thumb.text()));
  kb.add_source("response_2", n3::parse_document(fetched.body));
  auto get_filter = reason::FilterRule::from_document(
      "g2", n3::parse_document("@prefix dbpedia: <http://dbpedia.org/resource/>.\n"
                               "@prefix dbpedia-owl: <http://dbpedia.org/ontology/>.\n"
                               "{ <lena.jpg> dbpedia-owl:thumbnail <" + thumb.text() + ">. <" + thumb.text() +
                               "> a dbpedia:Image; dbpedia-owl:height 80.0 } => { <lena.jpg> dbpedia-owl:thumbnail <" +
                               thumb.text() + "> }."));
  CHECK(reason::prove(kb, get_filter).status == reason::ProveStatus::Proved);
}

TEST_CASE("socket adapter carries the same exchanges") {
  ImageServer server;
  HttpAdapter adapter(server);
  int port = adapter.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread serving([&] { adapter.serve(3); });
  httplib::Client client("127.0.0.1", port);
  httplib::Headers headers{{"Slug", "lena.jpg"}};
  auto posted = client.Post("/images/", headers, "bytes", "image/jpeg");
  REQUIRE(posted);
  CHECK(posted->status == 201);
  CHECK(posted->get_header_value("Content-Type") == "text/n3");
  auto thumb = client.Get("/images/24/thumbnail");
  REQUIRE(thumb);
  CHECK(thumb->status == 200);
  auto missing = client.Get("/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  serving.join();
  auto log = server.log();
  REQUIRE(log.requests.size() == 3);
  CHECK(log.requests[0].body == WireBody{WireBody::Kind::EntityRef, "lena.jpg"});
}
