#include "kgqa/answer.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "kgqa/errors.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

std::string_view to_string(RerankPlacement placement) {
    switch (placement) {
        case RerankPlacement::after_paraphrase: return "after_paraphrase";
        case RerankPlacement::before_paraphrase: return "before_paraphrase";
    }
    return "unknown";
}

std::vector<Statement> verbalize(const RetrievalBundle& bundle, const KnowledgeGraph& graph,
                                 std::size_t group_size) {
    if (group_size == 0) throw ValidationError("group_size must be at least 1");

    std::vector<std::string> group_order;
    std::unordered_map<std::string, std::vector<const BundleItem*>> groups;
    for (const auto& item : bundle.items) {
        auto [it, inserted] = groups.try_emplace(item.matched_node);
        if (inserted) group_order.push_back(item.matched_node);
        it->second.push_back(&item);
    }

    std::vector<Statement> out;
    for (const auto& node_id : group_order) {
        const auto& items = groups[node_id];
        for (std::size_t begin = 0; begin < items.size(); begin += group_size) {
            std::size_t end = std::min(begin + group_size, items.size());
            Statement statement;
            statement.group_node = node_id;
            std::string text;
            for (std::size_t j = begin; j < end; ++j) {
                const TypedEdge& edge = items[j]->edge;
                const EntityNode* subject = graph.find_node(edge.subject_id);
                const EntityNode* object = graph.find_node(edge.object_id);
                if (!subject || !object) {
                    throw IntegrityError("bundle edge references a node missing from the graph");
                }
                if (!text.empty()) text += ' ';
                text += subject->name;
                text += ' ';
                text += predicate_to_words(edge.predicate);
                text += ' ';
                text += object->name;
                text += '.';
                statement.source_edges.push_back(edge);
            }
            statement.text = std::move(text);
            out.push_back(std::move(statement));
        }
    }
    return out;
}

std::vector<std::string> paraphrase(const std::vector<std::string>& statements,
                                    Providers& providers) {
    if (statements.empty()) return {};
    std::vector<std::string> out;
    try {
        out = providers.paraphrase->paraphrase(statements);
        if (out.size() != statements.size()) {
            throw ProviderError("paraphrase", "expected one text per statement, got " +
                                                  std::to_string(out.size()));
        }
    } catch (const Error& e) {
        log_warn(std::string("paraphrase failed, keeping raw statements: ") + e.what());
        return statements;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (trim(out[i]).empty()) out[i] = statements[i];
    }
    return out;
}

std::vector<ScoredCandidate> rerank(const std::string& question,
                                    const std::vector<std::string>& candidates,
                                    Providers& providers) {
    if (candidates.empty()) return {};
    std::vector<double> scores;
    try {
        scores = providers.rerank->rerank(question, candidates);
        if (scores.size() != candidates.size()) {
            throw ProviderError("rerank", "expected one score per candidate, got " +
                                              std::to_string(scores.size()));
        }
    } catch (const Error& e) {
        log_warn(std::string("rerank provider failed, using offline scoring: ") + e.what());
        FallbackReranker fallback;
        scores = fallback.rerank(question, candidates);
    }

    std::vector<ScoredCandidate> out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out[i] = {candidates[i], scores[i], i};
    }
    std::stable_sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.text < b.text;
    });
    return out;
}

std::vector<AnswerCandidate> answer(const KnowledgeGraph& graph, const std::string& question,
                                    Providers& providers, const RetrievalConfig& retrieval,
                                    const SynthesisConfig& synthesis) {
    RetrievalBundle bundle = retrieve(graph, question, providers, retrieval);
    std::vector<Statement> statements = verbalize(bundle, graph, synthesis.group_size);
    if (statements.empty()) return {};

    std::vector<std::string> texts;
    texts.reserve(statements.size());
    for (const auto& s : statements) texts.push_back(s.text);

    std::vector<ScoredCandidate> scored;
    if (synthesis.rerank_placement == RerankPlacement::after_paraphrase) {
        scored = rerank(question, paraphrase(texts, providers), providers);
    } else {
        scored = rerank(question, texts, providers);
    }
    if (scored.size() > synthesis.top_n) scored.resize(synthesis.top_n);

    if (synthesis.rerank_placement == RerankPlacement::before_paraphrase) {
        // only the kept candidates are worth a paraphrase call
        std::vector<std::string> kept;
        kept.reserve(scored.size());
        for (const auto& s : scored) kept.push_back(s.text);
        auto rephrased = paraphrase(kept, providers);
        for (std::size_t i = 0; i < scored.size(); ++i) scored[i].text = rephrased[i];
    }

    std::vector<AnswerCandidate> out;
    out.reserve(scored.size());
    for (std::size_t i = 0; i < scored.size(); ++i) {
        AnswerCandidate candidate;
        candidate.text = scored[i].text;
        candidate.source_edges = statements[scored[i].input_index].source_edges;
        candidate.rerank_score = scored[i].score;
        candidate.rank = i + 1;
        out.push_back(std::move(candidate));
    }
    return out;
}

}  // namespace kgqa
