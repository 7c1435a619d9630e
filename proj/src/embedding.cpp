#include "kgqa/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "kgqa/errors.hpp"
#include "kgqa/providers.hpp"

namespace kgqa {

double cosine(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) {
        throw ValidationError("cosine: dimension mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw ValidationError("cosine: empty vectors");
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw ValidationError("cosine: zero vector has no direction");
    }
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

std::size_t embed_all(KnowledgeGraph& graph, EmbeddingProvider& provider) {
    std::vector<std::string> node_ids;
    std::vector<std::string> type_names;
    std::vector<std::string> texts;
    for (const auto& node : graph.nodes()) {
        if (node.embedding) continue;
        node_ids.push_back(node.id);
        texts.push_back(node.name + " (" + node.node_type + ")");
    }
    for (const auto& record : graph.type_records()) {
        if (record.embedding) continue;
        type_names.push_back(record.type_name);
        texts.push_back(record.type_name);
    }
    if (texts.empty()) return 0;

    std::vector<Embedding> vectors = provider.embed(texts);
    if (vectors.size() != texts.size()) {
        throw ProviderError("embed", "expected " + std::to_string(texts.size()) +
                                         " vectors, got " + std::to_string(vectors.size()));
    }
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim) {
            throw ProviderError("embed", "inconsistent vector dimensions in one response (" +
                                             std::to_string(dim) + " vs " +
                                             std::to_string(v.size()) + ")");
        }
    }

    std::size_t written = 0;
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
        graph.set_node_embedding(node_ids[i], std::move(vectors[i]));
        ++written;
    }
    for (std::size_t j = 0; j < type_names.size(); ++j) {
        graph.set_type_embedding(type_names[j], std::move(vectors[node_ids.size() + j]));
        ++written;
    }
    return written;
}

std::vector<ScoredMatch> top_k_nodes(const KnowledgeGraph& graph, const Embedding& query,
                                     std::size_t k) {
    std::vector<ScoredMatch> scored;
    for (const auto& node : graph.nodes()) {
        if (!node.embedding) continue;
        scored.push_back({node.id, cosine(*node.embedding, query), ScoredMatch::Kind::node});
    }
    auto better = [](const ScoredMatch& a, const ScoredMatch& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.target_id < b.target_id;
    };
    if (k < scored.size()) {
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                          scored.end(), better);
        scored.resize(k);
    } else {
        std::sort(scored.begin(), scored.end(), better);
    }
    return scored;
}

ScoredMatch top_type(const KnowledgeGraph& graph, const Embedding& query) {
    ScoredMatch best;
    bool found = false;
    // type_records() is ordered by name, so strict improvement keeps the
    // earliest name on ties.
    for (const auto& record : graph.type_records()) {
        if (!record.embedding) continue;
        double score = cosine(*record.embedding, query);
        if (!found || score > best.score) {
            best = {record.type_name, score, ScoredMatch::Kind::type};
            found = true;
        }
    }
    if (!found) throw NotFoundError("no node type has an embedding");
    return best;
}

}  // namespace kgqa
