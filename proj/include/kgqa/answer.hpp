#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kgqa/graph.hpp"
#include "kgqa/retrieve.hpp"

namespace kgqa {

struct Providers;

// One verbalized edge group: the reranker's candidate unit.
struct Statement {
    std::string text;
    std::vector<TypedEdge> source_edges;
    std::string group_node;  // the matched node the edges were grouped under
};

struct AnswerCandidate {
    std::string text;
    std::vector<TypedEdge> source_edges;
    std::optional<double> paraphrase_score;
    double rerank_score = 0.0;
    std::size_t rank = 0;  // 1-based, contiguous
};

enum class RerankPlacement { after_paraphrase, before_paraphrase };

std::string_view to_string(RerankPlacement placement);

struct SynthesisConfig {
    std::size_t group_size = 8;  // max edges per statement
    RerankPlacement rerank_placement = RerankPlacement::after_paraphrase;
    std::size_t top_n = 5;
};

// Groups bundle items by matched node (in order of first appearance, at most
// group_size edges per statement) and renders each group as
// "<subject> <predicate words> <object>." sentences joined by spaces.
std::vector<Statement> verbalize(const RetrievalBundle& bundle, const KnowledgeGraph& graph,
                                 std::size_t group_size = 8);

// One candidate text per statement. A provider failure (or an empty provider
// output) degrades that candidate to the raw statement text; nothing is ever
// dropped here.
std::vector<std::string> paraphrase(const std::vector<std::string>& statements,
                                    Providers& providers);

struct ScoredCandidate {
    std::string text;
    double score = 0.0;
    std::size_t input_index = 0;
};

// Scores every candidate against the question, descending, ties broken by
// ascending text (equal texts keep input order). Provider failure falls back
// to deterministic offline scoring.
std::vector<ScoredCandidate> rerank(const std::string& question,
                                    const std::vector<std::string>& candidates,
                                    Providers& providers);

// Full synthesis path: retrieve -> verbalize -> paraphrase/rerank (order per
// rerank_placement) -> top-n candidates with source edges preserved. A question
// with no retrievable candidates yields an empty list, not an error.
std::vector<AnswerCandidate> answer(const KnowledgeGraph& graph, const std::string& question,
                                    Providers& providers, const RetrievalConfig& retrieval = {},
                                    const SynthesisConfig& synthesis = {});

}  // namespace kgqa
