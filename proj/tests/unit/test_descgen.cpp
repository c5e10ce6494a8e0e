#include <doctest.h>

#include "common/skeleton_edits.hpp"
#include "pragproof/descgen/descgen.hpp"
#include "pragproof/n3/algebra.hpp"
#include "pragproof/n3/parser.hpp"
#include "support.hpp"

using namespace pragproof;
using namespace pragproof::descgen;
using skeleton_edits::same_shape;

namespace {

std::vector<TraceEntry> upload_trace() { return parse_trace(test_support::read_fixture("descgen/upload_trace.txt")); }

n3::Implication fixture_rule(const std::string& name) {
  return test_support::parse_fixture("image/descs/" + name + ".n3").body.implications.front();
}

}  // namespace

TEST_CASE("trace file parses into four exchanges") {
  auto trace = upload_trace();
  REQUIRE(trace.size() == 4);
  CHECK(trace[0].request.method == "POST");
  CHECK(trace[0].request.body == restdesc::WireBody{restdesc::WireBody::Kind::EntityRef, "image1.jpg"});
  CHECK(trace[1].request.target == "/images/24/thumbnail");
  CHECK(trace[1].response.status == 200);
  CHECK(n3::parse_formula(trace[3].response.body).atoms.size() == 3);
  CHECK(parse_trace(write_trace(trace)).size() == 4);
  auto again = parse_trace(write_trace(trace));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(again[i].request == trace[i].request);
    CHECK(again[i].response.body == trace[i].response.body);
  }
}

TEST_CASE("malformed traces are rejected") {
  CHECK_THROWS_AS(parse_trace("hello"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace(">>> GET\n<<< 200\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace(">>> GET /a\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace(">>> GET /a\n<<< ok\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace(">>> POST /a body\n<<< 200\n"), std::invalid_argument);
  auto inline_body = parse_trace(">>> POST /a \"x \\\"y\\\"\"\n<<< 200 text/n3\n");
  CHECK(inline_body[0].request.body->value == "x \"y\"");
}

TEST_CASE("edit distance") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(similarity("", "") == 1.0);
  CHECK(similarity("abcd", "abce") == doctest::Approx(0.75));
}

TEST_CASE("canonical bodies ignore prefixes and statement order") {
  CHECK(canonical_body("@prefix e: <http://e/>. e:a e:b e:c. e:a e:b e:d.") ==
        canonical_body("<http://e/a> <http://e/b> <http://e/d>.\n<http://e/a> <http://e/b> <http://e/c>."));
  CHECK(canonical_body("not n3 {") == "not n3 {");
}

TEST_CASE("uploads and thumbnail fetches form two clusters") {
  auto clusters = cluster_responses(upload_trace());
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].members == std::vector<std::size_t>{0, 2});
  CHECK(clusters[1].members == std::vector<std::size_t>{1, 3});
  CHECK(clusters[0].uri_template == "/images/");
  CHECK(clusters[1].uri_template == "/images/{}/thumbnail");
}

TEST_CASE("exact-match threshold leaves every response alone") {
  auto trace = upload_trace();
  auto clusters = cluster_responses(trace, 1.0);
  CHECK(clusters.size() == 4);
  for (std::size_t i = 0; i < trace.size(); ++i)
    for (std::size_t j = i + 1; j < trace.size(); ++j)
      CHECK(canonical_body(trace[i].response.body) != canonical_body(trace[j].response.body));
  CHECK(cluster_responses({trace.front()}).size() == 1);
  CHECK(cluster_responses(trace, 0.0).size() == 2);
  CHECK_THROWS_AS(cluster_responses({}), std::invalid_argument);
  CHECK_THROWS_AS(cluster_responses(trace, 1.5), std::invalid_argument);
}

TEST_CASE("upload skeleton generalizes the entity and the fresh links") {
  auto trace = upload_trace();
  auto skeletons = generate_skeletons(cluster_responses(trace), trace);
  REQUIRE(skeletons.size() == 2);
  const Skeleton& upload = skeletons[0];
  auto expected = n3::parse_document(
      "@prefix : <http://example.org/descgen#>.\n@prefix dbpedia: <http://dbpedia.org/resource/>.\n"
      "@prefix ex: <http://example.org/image#>.\n@prefix http: <http://www.w3.org/2011/http#>.\n"
      "{ ?object1 a :localFile. } => { _:request http:methodName \"POST\"; http:requestURI \"/images/\";"
      " http:body ?object1; http:resp [ http:body _:object2 ]."
      " _:object2 a dbpedia:Image; ex:comments _:object3; ex:smallThumbnail _:object4. }.");
  CHECK(same_shape(upload.rule, expected.body.implications.front()));
  REQUIRE(upload.generalized.size() == 4);
  CHECK(upload.generalized[0].variable == n3::Term::universal("object1"));
  CHECK(upload.generalized[0].values == std::vector<n3::Term>{n3::Term::uri("image1.jpg"), n3::Term::uri("image2.jpg")});
  CHECK(upload.generalized[3].variable == n3::Term::existential("object4"));
}

TEST_CASE("thumbnail skeleton gains its antecedent from the linking step") {
  auto trace = upload_trace();
  auto clusters = cluster_responses(trace);
  SkeletonOptions unlinked;
  unlinked.link = false;
  const Skeleton draft = generate_skeletons(clusters, trace, unlinked)[1];
  CHECK(draft.rule.antecedent.formula().empty());
  CHECK(draft.rule.consequent.formula().universal_free());

  const Skeleton linked = generate_skeletons(clusters, trace)[1];
  n3::Formula expected_pre({{n3::Term::universal("object2"), n3::Term::uri("http://example.org/image#smallThumbnail"),
                             n3::Term::universal("object1")}});
  CHECK(linked.rule.antecedent.formula() == expected_pre);
  auto rv = restdesc::validate_description("linked", n3::parse_document(to_n3(linked)));
  CHECK(rv.violations.empty());
  auto dv = restdesc::validate_description("draft", n3::parse_document(to_n3(draft)));
  CHECK_FALSE(dv.violations.empty());
}

TEST_CASE("skeletons equal the image descriptions after the documented edits") {
  auto trace = upload_trace();
  auto skeletons = generate_skeletons(cluster_responses(trace), trace);
  CHECK(same_shape(*skeleton_edits::edit_upload(skeletons[0]), fixture_rule("desc_images")));
  CHECK(same_shape(skeletons[1].rule, fixture_rule("desc_thumbnail")));
  CHECK_FALSE(same_shape(skeletons[0].rule, fixture_rule("desc_images")));
}

TEST_CASE("every skeleton parses back as one simple implication") {
  auto trace = upload_trace();
  for (double threshold : {0.0, 0.6, 1.0}) {
    for (const Skeleton& s : generate_skeletons(cluster_responses(trace, threshold), trace)) {
      n3::Document doc = n3::parse_document(to_n3(s));
      REQUIRE(doc.body.implications.size() == 1);
      CHECK(doc.body.atoms.empty());
      CHECK(same_shape(doc.body.implications.front(), s.rule));
      CHECK(n3::classify(doc.body.implications.front().consequent.formula()).simple);
    }
  }
}

TEST_CASE("identical constant responses generalize nothing") {
  auto trace = parse_trace(">>> GET /status\n<<< 200 text/n3\n<urn:s> <urn:p> \"up\".\n"
                           ">>> GET /status\n<<< 200 text/n3\n<urn:s> <urn:p> \"up\".\n");
  auto skeletons = generate_skeletons(cluster_responses(trace), trace);
  REQUIRE(skeletons.size() == 1);
  CHECK(skeletons[0].generalized.empty());
  CHECK(n3::variables(skeletons[0].rule.consequent.formula()).size() == 2);  // request and response nodes
  CHECK_THROWS_AS(generate_skeletons({Cluster{}}, trace), EmptyCluster);
}
