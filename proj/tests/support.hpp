#pragma once

// Shared test scaffolding: temp files, scripted providers, small graphs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgqa/errors.hpp"
#include "kgqa/graph.hpp"
#include "kgqa/providers.hpp"

namespace kgqa::test {

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 64; ++i) {
            auto candidate = base / ("kgqa-test-" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create a temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- scripted providers -----------------------------------------------------

struct ThrowingEmbedder final : EmbeddingProvider {
    std::string name() const override { return "throwing"; }
    std::vector<Embedding> embed(const std::vector<std::string>&) override {
        throw ProviderError("embed", "scripted failure");
    }
};

struct ThrowingParaphraser final : ParaphraseProvider {
    std::string name() const override { return "throwing"; }
    std::vector<std::string> paraphrase(const std::vector<std::string>&) override {
        throw ProviderError("paraphrase", "scripted failure");
    }
};

struct ThrowingReranker final : RerankProvider {
    std::string name() const override { return "throwing"; }
    std::vector<double> rerank(const std::string&, const std::vector<std::string>&) override {
        throw ProviderError("rerank", "scripted failure");
    }
};

struct ThrowingJudge final : JudgeProvider {
    std::string name() const override { return "throwing-judge"; }
    std::string judge(const JudgeRequest&) override {
        throw ProviderError("judge", "scripted failure");
    }
};

struct ThrowingPerturber final : PerturbProvider {
    std::string name() const override { return "throwing"; }
    std::vector<std::string> perturb(const std::vector<std::string>&) override {
        throw ProviderError("perturb", "scripted failure");
    }
};

struct ThrowingNER final : NERProvider {
    std::string name() const override { return "throwing"; }
    std::vector<EntityMention> mentions(const std::string&) override {
        throw ProviderError("ner", "scripted failure");
    }
};

struct ThrowingQAGen final : QAGenProvider {
    std::string name() const override { return "throwing"; }
    std::vector<QAPair> generate(const Chunk&) override {
        throw ProviderError("qa_gen", "scripted failure");
    }
};

struct ThrowingExtractor final : ExtractionProvider {
    std::string name() const override { return "throwing"; }
    std::vector<ExtractedTriple> extract(const ExtractionBatch&) override {
        throw ProviderError("extract", "scripted failure");
    }
};

// Counts judge calls so cache-replay tests can prove no re-query happened.
struct CountingJudge final : JudgeProvider {
    std::size_t calls = 0;
    SubstringJudge inner;
    std::string name() const override { return "fallback-substring"; }
    std::string judge(const JudgeRequest& request) override {
        ++calls;
        return inner.judge(request);
    }
};

inline Providers fallback_bundle() { return make_fallback_providers(); }

// A four-node contract-flavored graph with embeddings, used across suites.
//
//   Employer's Risk (Entity) -IS-> defined in the contract (Entity)
//   Clause 3.1 (Clause) -MENTIONS-> Employer's Risk
//   Performance Security (Entity) -HAS_VALUE-> 10% (NumericalValue)
inline KnowledgeGraph contract_graph() {
    KnowledgeGraph g;
    auto risk = g.upsert_node("Employer's Risk", "Entity").id;
    auto def = g.upsert_node("defined in the contract", "Entity").id;
    auto clause = g.upsert_node("Clause 3.1", "Clause").id;
    auto security = g.upsert_node("Performance Security", "Entity").id;
    auto pct = g.upsert_node("10%", "NumericalValue").id;
    g.insert_edge({risk, "IS", def, std::string("q1")});
    g.insert_edge({clause, "MENTIONS", risk, std::string("q1")});
    g.insert_edge({security, "HAS_VALUE", pct, std::string("q2")});
    for (const auto& node : g.nodes()) {
        g.set_node_embedding(node.id,
                             FallbackEmbedder::embed_one(node.name + " (" + node.node_type + ")"));
    }
    for (const auto& rec : g.type_records()) {
        g.set_type_embedding(rec.type_name, FallbackEmbedder::embed_one(rec.type_name));
    }
    return g;
}

}  // namespace kgqa::test
