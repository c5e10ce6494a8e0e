#include <functional>
#include <random>

#include "doctest.h"
#include "pragproof/n3/algebra.hpp"
#include "pragproof/n3/parser.hpp"
#include "pragproof/n3/serializer.hpp"
#include "support.hpp"

using namespace pragproof::n3;

namespace {

const std::string kEx = "http://example.org/";

Term ex(const std::string& local) { return Term::uri(kEx + local); }

Formula body(const std::string& text) { return parse_document("@prefix : <" + kEx + ">.\n" + text).body; }

bool has_variable(const std::set<Term>& terms) {
  for (const Term& t : terms)
    if (t.is_variable()) return true;
  return false;
}

}  // namespace

TEST_SUITE("n3.parse") {
  TEST_CASE("empty input yields an empty formula") {
    Document d = parse_document("");
    CHECK(d.body.empty());
    CHECK(d.prefixes.empty());
  }

  TEST_CASE("thumbnail description expands shortcuts in written order") {
    Document d = parse_document(test_support::read_fixture("image/descs/desc_thumbnail.n3"));
    REQUIRE(d.body.atoms.empty());
    REQUIRE(d.body.implications.size() == 1);
    const Implication& imp = d.body.implications[0];
    REQUIRE(imp.antecedent.is_graph());
    CHECK(imp.antecedent.formula().atoms.size() == 1);
    const Formula& post = imp.consequent.formula();
    REQUIRE(post.atoms.size() == 7);
    const std::string http = vocab::kHttp;
    CHECK(post.atoms[0].predicate == Term::uri(http + "methodName"));
    CHECK(post.atoms[0].object == Term::literal("GET"));
    CHECK(post.atoms[1].object == Term::universal("thumbnail"));
    CHECK(post.atoms[2].predicate == Term::uri(http + "resp"));
    CHECK(post.atoms[3].subject == post.atoms[2].object);
    CHECK(post.atoms[3].subject.is_existential());
    CHECK(post.atoms[6].object == Term::literal("80.0", vocab::kXsdDecimal));
  }

  TEST_CASE("upload description parses without a final dot") {
    Document d = parse_document(test_support::read_fixture("image/descs/desc_images.n3"));
    REQUIRE(d.body.implications.size() == 1);
    CHECK(d.body.implications[0].consequent.formula().atoms.size() == 7);
  }

  TEST_CASE("semicolon abbreviation equals the expanded statements") {
    CHECK(parse_formula("<d> <p> <e>; <q> <f>.") == parse_formula("<d> <p> <e>. <d> <q> <f>."));
  }

  TEST_CASE("predicate and object list shortcuts match expansions exhaustively") {
    for (int preds = 1; preds <= 3; ++preds) {
      for (int objs = 1; objs <= 3; ++objs) {
        std::string compact = ":s ";
        std::string expanded;
        for (int p = 0; p < preds; ++p) {
          if (p > 0) compact += "; ";
          compact += ":p" + std::to_string(p) + " ";
          for (int o = 0; o < objs; ++o) {
            if (o > 0) compact += ", ";
            compact += ":o" + std::to_string(o);
            expanded += ":s :p" + std::to_string(p) + " :o" + std::to_string(o) + ". ";
          }
        }
        compact += ".";
        CAPTURE(compact);
        CHECK(body(compact) == body(expanded));
      }
    }
  }

  TEST_CASE("blank node shortcuts become fresh existentials") {
    CHECK(body(":s :p [].") == body(":s :p _:b0."));
    CHECK(body(":s :p [ :q :r ].") == body(":s :p _:b0. _:b0 :q :r."));
    CHECK(body("[ :q :r ] :p :o.") == body("_:b0 :q :r. _:b0 :p :o."));
    CHECK(body(":s :p [ :q [ :r :t ] ].") == body(":s :p _:b0. _:b0 :q _:b1. _:b1 :r :t."));
    CHECK(body(":s a :C.") == body(":s <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> :C."));
  }

  TEST_CASE("fresh blank names skip labels already used") {
    Formula f = body("_:b0 :p [].");
    REQUIRE(f.atoms.size() == 1);
    CHECK(f.atoms[0].object == Term::existential("b1"));
  }

  TEST_CASE("terms of every kind") {
    Formula f = body(":s :p ( 1 \"x\" ?v ), { :a :b :c. }, false, true, 1.5e3, \"t\"^^:dt.");
    REQUIRE(f.atoms.size() == 6);
    CHECK(f.atoms[0].object.is_list());
    CHECK(f.atoms[0].object.items().size() == 3);
    CHECK(f.atoms[1].object.is_graph());
    CHECK(f.atoms[2].object.is_false());
    CHECK(f.atoms[3].object == Term::literal("true", vocab::kXsdBoolean));
    CHECK(f.atoms[4].object == Term::literal("1.5e3", vocab::kXsdDouble));
    CHECK(f.atoms[5].object == Term::literal("t", kEx + "dt"));
  }

  TEST_CASE("string escapes and long strings") {
    Formula f = body(":s :p \"a\\\"b\\n\", \"\"\"multi\nline\"\"\".");
    REQUIRE(f.atoms.size() == 2);
    CHECK(f.atoms[0].object.text() == "a\"b\n");
    CHECK(f.atoms[1].object.text() == "multi\nline");
  }

  TEST_CASE("base resolution") {
    Document d = parse_document("<a> <#p> </c>.", std::string("http://h.org/x/y"));
    REQUIRE(d.body.atoms.size() == 1);
    CHECK(d.body.atoms[0].subject.text() == "http://h.org/x/a");
    CHECK(d.body.atoms[0].predicate.text() == "http://h.org/x/y#p");
    CHECK(d.body.atoms[0].object.text() == "http://h.org/c");
  }

  TEST_CASE("errors carry positions") {
    CHECK_THROWS_AS(parse_document("ex:a ex:b ex:c."), ParseError);
    CHECK_THROWS_AS(parse_document("<a> <b> \"open"), ParseError);
    CHECK_THROWS_AS(parse_document("<a> <b> { <c> <d> <e>."), ParseError);
    CHECK_THROWS_AS(parse_document("<a> <b> ( <c>"), ParseError);
    CHECK_THROWS_AS(parse_document("<a> <b> \"x\"@en."), ParseError);
    CHECK_THROWS_AS(parse_document("<a> => <b>."), ParseError);
    try {
      parse_document("<a> <b> <c>.\n<d> <e> $");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 9);
    }
  }
}

TEST_SUITE("n3.serialize") {
  TEST_CASE("initial knowledge uses the type shorthand") {
    Document d = parse_document(test_support::read_fixture("image/agent_knowledge.n3"));
    std::string text = serialize(d);
    CHECK(text.find("<lena.jpg> a dbpedia:Image.") != std::string::npos);
  }

  TEST_CASE("empty document serializes to nothing") { CHECK(serialize(Document{}).empty()); }

  TEST_CASE("expanded form has no grouping") {
    Document d = parse_document(test_support::read_fixture("image/descs/desc_thumbnail.n3"));
    std::string text = serialize(d, {.expand = true});
    CHECK(text.find(';') == std::string::npos);
    CHECK(text.find(" a ") == std::string::npos);
    CHECK(parse_document(text).body == d.body);
  }

  TEST_CASE("fixture round trips") {
    for (const char* name : {"image/descs/desc_thumbnail.n3", "image/descs/desc_images.n3",
                             "image/agent_knowledge.n3", "image/agent_goal.n3"}) {
      CAPTURE(name);
      Document d = parse_document(test_support::read_fixture(name));
      Document again = parse_document(serialize(d));
      CHECK(again.body == d.body);
      CHECK(again.prefixes == d.prefixes);
    }
  }

  TEST_CASE("random formulas round trip") {
    std::mt19937_64 rng(20240611);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    std::function<Term(int)> random_term = [&](int depth) -> Term {
      switch (pick(depth > 0 ? 9 : 7)) {
        case 0: return ex("n" + std::to_string(pick(5)));
        case 1: return Term::uri("rel/" + std::to_string(pick(3)));
        case 2: return Term::literal(pick(2) ? "plain \"q\"\n" : "", pick(2) ? "" : kEx + "dt");
        case 3: return Term::literal(std::to_string(pick(100) - 50), vocab::kXsdInteger);
        case 4: return Term::literal(pick(2) ? "80.0" : "false", pick(2) ? vocab::kXsdDecimal : vocab::kXsdBoolean);
        case 5: return Term::existential("e" + std::to_string(pick(4)));
        case 6: return Term::universal("u" + std::to_string(pick(4)));
        case 7: {
          std::vector<Term> items;
          for (int i = pick(3); i > 0; --i) items.push_back(random_term(depth - 1));
          return Term::list(std::move(items));
        }
        default: {
          Formula inner;
          for (int i = pick(3); i > 0; --i) inner.atoms.push_back({random_term(depth - 1), ex("p"), random_term(depth - 1)});
          return Term::graph(std::move(inner));
        }
      }
    };
    for (int round = 0; round < 200; ++round) {
      Document d;
      d.prefixes["ex"] = kEx;
      int atoms = pick(21);
      for (int i = 0; i < atoms; ++i) {
        Term pred = pick(4) == 0 ? Term::uri(vocab::kRdfType) : ex("p" + std::to_string(pick(3)));
        d.body.atoms.push_back({random_term(1), pred, random_term(1)});
      }
      if (pick(3) == 0) {
        Formula a, c;
        a.atoms.push_back({Term::universal("u0"), ex("p0"), random_term(0)});
        c.atoms.push_back({Term::universal("u0"), ex("p1"), Term::existential("e0")});
        d.body.implications.push_back({Term::graph(a), pick(4) ? Term::graph(c) : Term::falsum()});
      }
      std::string text = serialize(d);
      CAPTURE(text);
      Document again = parse_document(text);
      CHECK(again.body == d.body);
      CHECK(isomorphic(again.body, d.body));
    }
  }
}

TEST_SUITE("n3.algebra") {
  TEST_CASE("direct and nested components") {
    Formula f = body(":John :says { :Kurt :knows :Albert. }.");
    std::set<Term> level1 = components(f, 1);
    CHECK(level1.size() == 3);
    CHECK(level1.count(ex("John")));
    CHECK(level1.count(ex("says")));
    CHECK(level1.count(Term::graph(body(":Kurt :knows :Albert."))));
    CHECK(components(f, 2) == std::set<Term>{ex("Kurt"), ex("knows"), ex("Albert")});
    CHECK(components(f, 3).empty());
    CHECK(components(body(":a :b :c."), 3).empty());
  }

  TEST_CASE("lists are flattened into components") {
    Formula f = body(":a :b ( :c ( :d ) ).");
    CHECK(components(f, 1) == std::set<Term>{ex("a"), ex("b"), ex("c"), ex("d")});
  }

  TEST_CASE("component application leaves nested formulas alone") {
    Substitution s;
    s.bind(Term::existential("x"), ex("Kurt"));
    Formula f = body("_:x :says { _:x :knows :Albert. }.");
    CHECK(apply_substitution(f, s, ApplyMode::Component) == body(":Kurt :says { _:x :knows :Albert. }."));
  }

  TEST_CASE("total application replaces every occurrence") {
    Substitution s;
    s.bind(Term::universal("x"), ex("Kurt"));
    Formula f = body("?x :says { ?x :knows :Albert. }.");
    CHECK(apply_substitution(f, s, ApplyMode::Total) == body(":Kurt :says { :Kurt :knows :Albert. }."));
  }

  TEST_CASE("empty substitution is the identity") {
    Formula f = body("?x :says { _:y :knows :Albert. }. { ?x :p :q. } => { ?x :r _:z. }.");
    Substitution none;
    CHECK(apply_substitution(f, none, ApplyMode::Component) == f);
    CHECK(apply_substitution(f, none, ApplyMode::Total) == f);
  }

  TEST_CASE("identity pairs are rejected") {
    Substitution s;
    CHECK_THROWS_AS(s.bind(Term::universal("x"), Term::universal("x")), std::invalid_argument);
    CHECK_THROWS_AS(s.bind(ex("a"), ex("b")), std::invalid_argument);
  }

  TEST_CASE("substitution laws on random formulas") {
    std::mt19937 rng(7);
    std::vector<Term> pool = {ex("a"), ex("b"), Term::universal("x"), Term::universal("y"), Term::existential("z")};
    for (int round = 0; round < 100; ++round) {
      Formula inner, plain;
      for (int i = 0; i < 3; ++i) {
        inner.atoms.push_back({pool[rng() % 5], ex("p"), pool[rng() % 5]});
        plain.atoms.push_back({pool[rng() % 5], ex("q"), pool[rng() % 5]});
      }
      Formula nested = plain;
      nested.atoms.push_back({pool[rng() % 5], ex("says"), Term::graph(inner)});
      Substitution s;
      s.bind(Term::universal("x"), ex("k"));
      s.bind(Term::existential("z"), Term::literal("v"));
      CHECK(components(apply_substitution(nested, s, ApplyMode::Component), 2) == components(nested, 2));
      CHECK(apply_substitution(plain, s, ApplyMode::Component) == apply_substitution(plain, s, ApplyMode::Total));
    }
  }

  TEST_CASE("classification of the image fixtures") {
    Classification k = classify(parse_document(test_support::read_fixture("image/agent_knowledge.n3")).body);
    CHECK(k.ground);
    CHECK(k.universal_free);
    CHECK(k.simple);
    Classification t = classify(parse_document(test_support::read_fixture("image/descs/desc_thumbnail.n3")).body);
    CHECK_FALSE(t.ground);
    CHECK_FALSE(t.universal_free);
    CHECK(t.simple);
  }

  TEST_CASE("nested implications are not simple") {
    Formula f = body("{ { ?x :p :a. } => { ?x :q :b. }. } => { { ?x :r :c. } => { ?x :s :d. }. }.");
    CHECK_FALSE(classify(f).simple);
    CHECK(components(f, 3).count(ex("p")));
  }

  TEST_CASE("ground formulas have no variables at any level") {
    for (const char* text : {":a :b :c.", ":a :b { :c :d ( :e ) }.", "{ :a :b :c. } => { :d :e :f. }."}) {
      Formula f = body(text);
      REQUIRE(classify(f).ground);
      for (int level = 1; level <= 3; ++level) CHECK_FALSE(has_variable(components(f, level)));
    }
  }

  TEST_CASE("variables in first occurrence order") {
    Document d = parse_document(test_support::read_fixture("image/descs/desc_images.n3"));
    auto order = variables_in_order(d.body.implications[0]);
    REQUIRE(order.size() == 5);
    CHECK(order[0] == Term::universal("image"));
    CHECK(order[1] == Term::existential("request"));
    CHECK(order[3] == Term::existential("comments"));
    CHECK(order[4] == Term::existential("thumb"));
  }

  TEST_CASE("isomorphism respects variable bijection") {
    CHECK(isomorphic(body("?x :p _:y. _:y :q ?x."), body("_:b :q ?z. ?z :p _:b.")));
    CHECK_FALSE(isomorphic(body("?x :p ?x."), body("?x :p ?y.")));
    CHECK_FALSE(isomorphic(body("?x :p ?y."), body("?x :p ?x.")));
    CHECK_FALSE(isomorphic(body("?x :p :a."), body("_:x :p :a.")));
    CHECK(isomorphic(body("{ ?x :p :a. } => { ?x :q _:e. }."), body("{ ?w :p :a. } => { ?w :q _:f. }.")));
  }
}
