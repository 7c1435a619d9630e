#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kgqa/embedding.hpp"
#include "kgqa/graph.hpp"

namespace kgqa {

struct Providers;

struct EntityMention {
    enum class Source { ner_provider, fallback_heuristic };
    std::string text;
    std::size_t start = 0;  // byte span within the question
    std::size_t end = 0;
    Source source = Source::fallback_heuristic;
};

enum class RetrievalStage { semantic, type_general, fuzzy };

std::string_view to_string(RetrievalStage stage);

struct BundleItem {
    TypedEdge edge;
    RetrievalStage stage = RetrievalStage::semantic;
    double score = 0.0;
    std::string matched_node;  // always an endpoint of edge
};

struct RetrievalBundle {
    std::string question;
    std::vector<BundleItem> items;
};

struct RetrievalConfig {
    std::size_t k = 5;                 // node-level matches to expand
    std::size_t edit_distance_max = 3;
    std::size_t max_bundle = 64;
    bool fuzzy_only = false;           // degraded mode: skip embedding stages
};

// Step 1: neighborhoods of the k most similar nodes; every item scores as its
// node's cosine similarity.
std::vector<BundleItem> semantic_stage(const KnowledgeGraph& graph, const Embedding& question_vec,
                                       std::size_t k);

// Step 2: every edge incident to any node of the most similar type. A graph
// with no embedded types yields an empty result.
std::vector<BundleItem> type_stage(const KnowledgeGraph& graph, const Embedding& question_vec);

// Mentions via the NER provider; falls back to the built-in heuristic when the
// provider fails (logged, never an error).
std::vector<EntityMention> extract_mentions(const std::string& question, Providers& providers);

// The heuristic itself: capitalized-word runs (leading stopwords discarded),
// double-quoted spans, and "Clause <number>" patterns.
std::vector<EntityMention> heuristic_mentions(const std::string& question);

// Step 3: nodes whose normalized name is within the edit-distance budget of a
// normalized mention; each match contributes its neighborhood with score
// 1 - d / (max + 1), which stays inside (0, 1].
std::vector<BundleItem> fuzzy_stage(const KnowledgeGraph& graph,
                                    const std::vector<EntityMention>& mentions,
                                    std::size_t max_distance = 3);

// All three steps merged. Duplicate edges keep the highest-priority stage tag
// (semantic > type_general > fuzzy); when the merged set exceeds max_bundle it
// is capped with per-stage quotas proportional to stage sizes, keeping the
// highest scores within each stage.
RetrievalBundle retrieve(const KnowledgeGraph& graph, const std::string& question,
                         Providers& providers, const RetrievalConfig& config = {});

}  // namespace kgqa
