#include <doctest.h>

#include <sstream>

#include "kgqa/errors.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/qa.hpp"
#include "support.hpp"

using namespace kgqa;

namespace {

Chunk make_chunk(std::string id, std::string text) {
    Chunk c;
    c.chunk_id = std::move(id);
    c.text = std::move(text);
    return c;
}

// Emits pairs verbatim from a script, one list per call.
struct ScriptedQAGen final : QAGenProvider {
    std::vector<std::vector<QAPair>> script;
    std::size_t next = 0;
    std::string name() const override { return "scripted"; }
    std::vector<QAPair> generate(const Chunk&) override {
        if (next >= script.size()) return {};
        return script[next++];
    }
};

}  // namespace

TEST_SUITE("qa") {

TEST_CASE("dataset save and load round trip") {
    std::vector<QAPair> pairs = {
        {"q1", "What is X?", "X is Y.", std::string("c0001"), {"tagA", "tagB"}},
        {"q2", "What is Z?", "invalid question", std::nullopt, {}},
    };
    std::stringstream ss;
    save_qa_dataset(pairs, ss);
    auto loaded = load_qa_dataset(ss);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0] == pairs[0]);
    CHECK(loaded[1] == pairs[1]);
}

TEST_CASE("dataset parsing rejects malformed entries with their index") {
    auto expect_throw = [](const std::string& text, const std::string& needle) {
        std::stringstream ss(text);
        try {
            load_qa_dataset(ss);
            FAIL_CHECK("expected an error for: " << text);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_throw("{", "invalid QA dataset JSON");
    expect_throw(R"({"qa_id":"q1"})", "must be a JSON array");
    expect_throw(R"([{"qa_id":"q1","question":"?"}])", "missing string field 'answer'");
    expect_throw(R"([{"qa_id":"q1","question":"?","answer":42}])", "missing string field 'answer'");
    expect_throw(R"(["nope"])", "#1 is not an object");
    expect_throw(R"([{"qa_id":"","question":"a?","answer":"b"}])", "empty qa_id");
    expect_throw(R"([{"qa_id":"q1","question":"  ","answer":"b"}])", "#1");
    expect_throw(R"([{"qa_id":"q1","question":"a?","answer":"b","tags":"x"}])", "non-array tags");
}

TEST_CASE("duplicate qa_ids are reported together") {
    std::stringstream ss(R"([
        {"qa_id":"q1","question":"a?","answer":"b"},
        {"qa_id":"q1","question":"c?","answer":"d"},
        {"qa_id":"q2","question":"e?","answer":"f"},
        {"qa_id":"q2","question":"g?","answer":"h"}
    ])");
    try {
        load_qa_dataset(ss);
        FAIL_CHECK("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("'q1'") != std::string::npos);
        CHECK(msg.find("'q2'") != std::string::npos);
    }
}

TEST_CASE("generate_qa assigns chunk-scoped ids in chunk order") {
    ScriptedQAGen gen;
    gen.script = {
        {{"", "Q one?", "A one.", std::nullopt, {}}, {"", "Q two?", "A two.", std::nullopt, {}}},
        {{"", "Q three?", "A three.", std::nullopt, {}}},
    };
    auto report = generate_qa({make_chunk("c0001", "t1"), make_chunk("c0002", "t2")}, gen);
    REQUIRE(report.pairs.size() == 3);
    CHECK(report.pairs[0].qa_id == "c0001-q1");
    CHECK(report.pairs[1].qa_id == "c0001-q2");
    CHECK(report.pairs[2].qa_id == "c0002-q1");
    CHECK(report.pairs[0].source_chunk == "c0001");
    CHECK(report.pairs[2].source_chunk == "c0002");
    CHECK(report.dropped == 0);
    CHECK(report.failed_chunks.empty());
}

TEST_CASE("generate_qa drops blank pairs and keeps numbering dense") {
    ScriptedQAGen gen;
    gen.script = {{
        {"", "  ", "A.", std::nullopt, {}},
        {"", "Q?", "", std::nullopt, {}},
        {"", "Q kept?", "A kept.", std::nullopt, {}},
    }};
    auto report = generate_qa({make_chunk("c0001", "t")}, gen);
    REQUIRE(report.pairs.size() == 1);
    CHECK(report.pairs[0].qa_id == "c0001-q1");
    CHECK(report.dropped == 2);
}

TEST_CASE("a failing chunk is recorded and the run continues") {
    test::ThrowingQAGen gen;
    auto report = generate_qa({make_chunk("c0001", "t"), make_chunk("c0002", "t")}, gen);
    CHECK(report.pairs.empty());
    REQUIRE(report.failed_chunks.size() == 2);
    CHECK(report.failed_chunks[0] == "c0001");
}

TEST_CASE("the fallback generator asks about the first mention of each statement") {
    FallbackQAGen gen;
    Chunk chunk = make_chunk(
        "c0001", "The Employer carries the flood risk. Is that fair? Contractors disagree.");
    auto pairs = gen.generate(chunk);
    REQUIRE(pairs.size() == 2);  // the interrogative sentence is skipped
    CHECK(pairs[0].question == "What does the document state about Employer?");
    CHECK(pairs[0].answer == "The Employer carries the flood risk.");
    CHECK(pairs[1].question == "What does the document state about Contractors?");
}

TEST_CASE("the fallback generator finds a subject in lowercase text") {
    FallbackQAGen gen;
    auto pairs = gen.generate(make_chunk("c0001", "the turbine spins daily."));
    REQUIRE(pairs.size() == 1);
    // leading stopwords are skipped, not asked about
    CHECK(pairs[0].question == "What does the document state about turbine?");
}

}  // TEST_SUITE
