#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kgqa/graph.hpp"

namespace kgqa {

class EmbeddingProvider;

inline constexpr std::size_t kFallbackEmbeddingDim = 256;

struct ScoredMatch {
    enum class Kind { node, type };
    std::string target_id;  // node id, or type name for Kind::type
    double score = 0.0;
    Kind kind = Kind::node;
};

// Plain cosine similarity dot(a,b) / (|a||b|). Throws ValidationError on a
// dimension mismatch or an all-zero vector (similarity would be undefined).
double cosine(const Embedding& a, const Embedding& b);

// Embeds every node and node-type record that does not have a vector yet.
// Node text is "<name> (<node_type>)"; type text is the type name. Returns
// the number of vectors written. Inconsistent dimensions across provider
// responses are a hard error.
std::size_t embed_all(KnowledgeGraph& graph, EmbeddingProvider& provider);

// Exact top-k by cosine similarity, descending, ties broken by ascending id.
// Nodes without embeddings are not searchable and are skipped.
std::vector<ScoredMatch> top_k_nodes(const KnowledgeGraph& graph, const Embedding& query,
                                     std::size_t k);

// The single most similar node type (ties by ascending type name). Throws
// NotFoundError when no type has an embedding.
ScoredMatch top_type(const KnowledgeGraph& graph, const Embedding& query);

}  // namespace kgqa
