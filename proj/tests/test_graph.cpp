#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "kgqa/errors.hpp"
#include "kgqa/graph.hpp"
#include "support.hpp"

using namespace kgqa;

TEST_SUITE("graph") {

TEST_CASE("node identity is the case-insensitive name and type pair") {
    KnowledgeGraph g;
    const auto& a = g.upsert_node("Employer's Risk", "Entity");
    const auto& b = g.upsert_node("  employer's risk ", "Entity");
    CHECK(a.id == b.id);
    CHECK(g.node_count() == 1);
    CHECK(a.name == "Employer's Risk");  // first spelling wins

    // same name under a different type is a different node
    const auto& c = g.upsert_node("Employer's Risk", "Clause");
    CHECK(c.id != a.id);
    CHECK(g.node_count() == 2);
}

TEST_CASE("node ids derive from content, not insertion order") {
    KnowledgeGraph g1;
    KnowledgeGraph g2;
    g1.upsert_node("alpha", "Entity");
    g1.upsert_node("beta", "Entity");
    g2.upsert_node("beta", "Entity");
    g2.upsert_node("alpha", "Entity");
    CHECK(g1.find_by_name_type("alpha", "Entity")->id == g2.find_by_name_type("alpha", "Entity")->id);
    CHECK(KnowledgeGraph::node_id_for("Alpha ", "Entity") ==
          KnowledgeGraph::node_id_for("alpha", "Entity"));
    CHECK(g1 == g2);
}

TEST_CASE("upsert rejects empty names and types") {
    KnowledgeGraph g;
    CHECK_THROWS_AS(g.upsert_node("  ", "Entity"), ValidationError);
    CHECK_THROWS_AS(g.upsert_node("x", "\t"), ValidationError);
}

TEST_CASE("an embedding passed for an existing node is ignored") {
    KnowledgeGraph g;
    g.upsert_node("x", "Entity", Embedding{1.0, 0.0});
    const auto& again = g.upsert_node("x", "Entity", Embedding{0.0, 1.0});
    REQUIRE(again.embedding.has_value());
    CHECK((*again.embedding)[0] == 1.0);
}

TEST_CASE("edges are idempotent and need resolvable endpoints") {
    KnowledgeGraph g;
    auto a = g.upsert_node("a", "Entity").id;
    auto b = g.upsert_node("b", "Entity").id;
    CHECK(g.insert_edge({a, "REL", b, std::nullopt}));
    CHECK_FALSE(g.insert_edge({a, "REL", b, std::string("other-prov")}));
    CHECK(g.edge_count() == 1);
    CHECK(g.insert_edge({b, "REL", a, std::nullopt}));  // direction matters
    CHECK_THROWS_AS(g.insert_edge({a, "REL", "n0000000000000000", std::nullopt}), IntegrityError);
    CHECK_THROWS_AS(g.insert_edge({a, " ", b, std::nullopt}), ValidationError);
}

TEST_CASE("neighborhood covers both directions and lists a self-loop once") {
    KnowledgeGraph g;
    auto a = g.upsert_node("a", "Entity").id;
    auto b = g.upsert_node("b", "Entity").id;
    auto c = g.upsert_node("c", "Entity").id;
    g.insert_edge({a, "TO", b, std::nullopt});
    g.insert_edge({c, "TO", a, std::nullopt});
    g.insert_edge({a, "SELF", a, std::nullopt});
    auto n = g.neighborhood(a);
    CHECK(n.size() == 3);
    CHECK(g.neighborhood(b).size() == 1);
    CHECK_THROWS_AS(g.neighborhood("nope"), NotFoundError);
}

TEST_CASE("type records count members and stay ordered by name") {
    KnowledgeGraph g;
    g.upsert_node("a", "Entity");
    g.upsert_node("b", "Entity");
    g.upsert_node("3.1", "Clause");
    auto recs = g.type_records();
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].type_name == "Clause");
    CHECK(recs[0].member_count == 1);
    CHECK(recs[1].type_name == "Entity");
    CHECK(recs[1].member_count == 2);
    CHECK(g.find_type("Entity") != nullptr);
    CHECK(g.find_type("Nope") == nullptr);
}

TEST_CASE("embedding dimension is adopted once and then enforced") {
    KnowledgeGraph g;
    auto a = g.upsert_node("a", "Entity").id;
    CHECK_FALSE(g.embedding_dim().has_value());
    g.set_node_embedding(a, {1.0, 2.0, 3.0});
    CHECK(g.embedding_dim() == 3);
    auto b = g.upsert_node("b", "Entity").id;
    CHECK_THROWS_AS(g.set_node_embedding(b, {1.0}), ValidationError);
    CHECK_THROWS_AS(g.set_node_embedding(b, {}), ValidationError);
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(g.set_node_embedding(b, {1.0, inf, 0.0}), ValidationError);
    CHECK_THROWS_AS(g.set_node_embedding("missing", {1.0, 2.0, 3.0}), NotFoundError);
    g.set_type_embedding("Entity", {0.0, 1.0, 0.0});
    CHECK_THROWS_AS(g.set_type_embedding("Entity", {1.0}), ValidationError);
    CHECK_THROWS_AS(g.set_type_embedding("Nope", {1.0, 0.0, 0.0}), NotFoundError);
}

TEST_CASE("save then load reproduces the graph exactly") {
    auto g = test::contract_graph();
    std::stringstream ss;
    g.save(ss);
    auto loaded = KnowledgeGraph::load(ss);
    CHECK(loaded == g);
    CHECK(loaded.embedding_dim() == g.embedding_dim());
    // a second save of the loaded graph is byte-identical
    std::stringstream ss1, ss2;
    g.save(ss1);
    loaded.save(ss2);
    CHECK(ss1.str() == ss2.str());
}

TEST_CASE("load round trip preserves embeddings bit-exactly") {
    KnowledgeGraph g;
    auto a = g.upsert_node("a", "Entity").id;
    // awkward doubles that lose digits under naive formatting
    g.set_node_embedding(a, {0.1, -1.0 / 3.0, 1e-17, 12345.6789012345678});
    std::stringstream ss;
    g.save(ss);
    auto loaded = KnowledgeGraph::load(ss);
    REQUIRE(loaded.find_node(a));
    REQUIRE(loaded.find_node(a)->embedding.has_value());
    CHECK(*loaded.find_node(a)->embedding == *g.find_node(a)->embedding);
}

TEST_CASE("load rejects malformed streams with line numbers") {
    auto expect_parse_error = [](const std::string& text, std::size_t line) {
        std::stringstream ss(text);
        try {
            KnowledgeGraph::load(ss);
            FAIL_CHECK("expected ParseError for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
        }
    };
    const std::string header = R"({"format":"kgqa-graph","version":1,"embedding_dim":null})";
    const std::string node_a = R"({"kind":"node","id":"n1","name":"a","node_type":"Entity"})";

    expect_parse_error("", 1);
    expect_parse_error("not json", 1);
    expect_parse_error(R"({"format":"other","version":1})", 1);
    expect_parse_error(R"({"format":"kgqa-graph","version":9})", 1);
    expect_parse_error(header + "\n" + R"({"kind":"widget"})", 2);
    expect_parse_error(header + "\n" + R"({"kind":"node","id":"n1","name":"a"})", 2);
    expect_parse_error(header + "\n" + node_a + "\n" + node_a, 3);  // duplicate id
    // edge must come after both endpoints
    expect_parse_error(header + "\n" + node_a + "\n" +
                           R"({"kind":"edge","subject_id":"n1","predicate":"R","object_id":"n2"})",
                       3);
    // duplicate edge
    expect_parse_error(
        header + "\n" + node_a + "\n" +
            R"({"kind":"edge","subject_id":"n1","predicate":"R","object_id":"n1"})" + "\n" +
            R"({"kind":"edge","subject_id":"n1","predicate":"R","object_id":"n1"})",
        4);
    // type record contradicting node contents
    expect_parse_error(header + "\n" + node_a + "\n" +
                           R"({"kind":"type","type_name":"Entity","member_count":5})",
                       3);
    expect_parse_error(header + "\n" + R"({"kind":"type","type_name":"Ghost","member_count":0})",
                       2);
}

TEST_CASE("load rejects embeddings that contradict the header") {
    const std::string null_header = R"({"format":"kgqa-graph","version":1,"embedding_dim":null})";
    std::stringstream a(null_header + "\n" +
                        R"({"kind":"node","id":"n1","name":"a","node_type":"E","embedding":[1.0]})");
    CHECK_THROWS_AS(KnowledgeGraph::load(a), ValidationError);

    const std::string dim2 = R"({"format":"kgqa-graph","version":1,"embedding_dim":2})";
    std::stringstream b(dim2 + "\n" +
                        R"({"kind":"node","id":"n1","name":"a","node_type":"E","embedding":[1.0]})");
    CHECK_THROWS_AS(KnowledgeGraph::load(b), ValidationError);
}

TEST_CASE("structural equality ignores insertion order but not content") {
    KnowledgeGraph g1, g2;
    auto a1 = g1.upsert_node("a", "Entity").id;
    auto b1 = g1.upsert_node("b", "Entity").id;
    g1.insert_edge({a1, "R", b1, std::nullopt});

    auto b2 = g2.upsert_node("b", "Entity").id;
    auto a2 = g2.upsert_node("a", "Entity").id;
    g2.insert_edge({a2, "R", b2, std::nullopt});
    CHECK(g1 == g2);

    g2.insert_edge({b2, "R", a2, std::nullopt});
    CHECK(g1 != g2);
}

TEST_CASE("random graphs survive shuffled rebuild and file round trip") {
    std::mt19937 rng(99);
    test::TempDir dir;
    for (int round = 0; round < 20; ++round) {
        std::uniform_int_distribution<int> n_nodes(1, 30);
        const int n = n_nodes(rng);
        std::vector<std::pair<std::string, std::string>> specs;
        for (int i = 0; i < n; ++i) {
            specs.emplace_back("node " + std::to_string(i), i % 3 ? "Entity" : "Clause");
        }
        std::vector<TypedEdge> edges;
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int i = 0; i < n; ++i) {
            auto& from = specs[static_cast<std::size_t>(pick(rng))];
            auto& to = specs[static_cast<std::size_t>(pick(rng))];
            edges.push_back({KnowledgeGraph::node_id_for(from.first, from.second), "R",
                             KnowledgeGraph::node_id_for(to.first, to.second), std::nullopt});
        }

        auto build = [&](const std::vector<std::pair<std::string, std::string>>& ns,
                         const std::vector<TypedEdge>& es) {
            KnowledgeGraph g;
            for (const auto& [name, type] : ns) g.upsert_node(name, type);
            for (const auto& e : es) g.insert_edge(e);
            return g;
        };

        auto shuffled_specs = specs;
        auto shuffled_edges = edges;
        std::shuffle(shuffled_specs.begin(), shuffled_specs.end(), rng);
        std::shuffle(shuffled_edges.begin(), shuffled_edges.end(), rng);

        auto g1 = build(specs, edges);
        auto g2 = build(shuffled_specs, shuffled_edges);
        CHECK(g1 == g2);

        const auto path = dir.file("roundtrip.jsonl");
        g1.save_file(path);
        CHECK(KnowledgeGraph::load_file(path) == g1);
    }
}

TEST_CASE("file io errors surface as IoError") {
    KnowledgeGraph g;
    CHECK_THROWS_AS(KnowledgeGraph::load_file("/nonexistent/path/graph.jsonl"), IoError);
    CHECK_THROWS_AS(g.save_file("/nonexistent/dir/graph.jsonl"), IoError);
}

}  // TEST_SUITE
