#include "kgqa/retrieve.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "kgqa/errors.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

namespace {

std::string edge_key(const TypedEdge& e) {
    std::string key;
    key.reserve(e.subject_id.size() + e.predicate.size() + e.object_id.size() + 2);
    key += e.subject_id;
    key += '\x1f';
    key += e.predicate;
    key += '\x1f';
    key += e.object_id;
    return key;
}

int stage_priority(RetrievalStage stage) {
    switch (stage) {
        case RetrievalStage::semantic: return 0;
        case RetrievalStage::type_general: return 1;
        case RetrievalStage::fuzzy: return 2;
    }
    return 3;
}

// (stage priority, score desc, edge key asc): the one deterministic bundle
// order used both with and without the size cap
bool bundle_order(const BundleItem& a, const BundleItem& b) {
    int pa = stage_priority(a.stage), pb = stage_priority(b.stage);
    if (pa != pb) return pa < pb;
    if (a.score != b.score) return a.score > b.score;
    return edge_key(a.edge) < edge_key(b.edge);
}

bool overlaps(std::size_t b1, std::size_t e1, std::size_t b2, std::size_t e2) {
    return b1 < e2 && b2 < e1;
}

bool overlaps_any(const std::vector<EntityMention>& mentions, std::size_t begin, std::size_t end) {
    for (const auto& m : mentions) {
        if (overlaps(m.start, m.end, begin, end)) return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(RetrievalStage stage) {
    switch (stage) {
        case RetrievalStage::semantic: return "semantic";
        case RetrievalStage::type_general: return "type_general";
        case RetrievalStage::fuzzy: return "fuzzy";
    }
    return "unknown";
}

std::vector<BundleItem> semantic_stage(const KnowledgeGraph& graph, const Embedding& question_vec,
                                       std::size_t k) {
    std::vector<BundleItem> items;
    std::unordered_set<std::string> seen;
    for (const auto& match : top_k_nodes(graph, question_vec, k)) {
        for (auto& edge : graph.neighborhood(match.target_id)) {
            if (!seen.insert(edge_key(edge)).second) continue;
            items.push_back({std::move(edge), RetrievalStage::semantic, match.score, match.target_id});
        }
    }
    return items;
}

std::vector<BundleItem> type_stage(const KnowledgeGraph& graph, const Embedding& question_vec) {
    ScoredMatch best;
    try {
        best = top_type(graph, question_vec);
    } catch (const NotFoundError&) {
        return {};
    }

    std::vector<BundleItem> items;
    std::unordered_set<std::string> seen;
    for (const auto& node : graph.nodes()) {
        if (node.node_type != best.target_id) continue;
        for (auto& edge : graph.neighborhood(node.id)) {
            if (!seen.insert(edge_key(edge)).second) continue;
            items.push_back({std::move(edge), RetrievalStage::type_general, best.score, node.id});
        }
    }
    return items;
}

std::vector<EntityMention> heuristic_mentions(const std::string& question) {
    std::vector<EntityMention> mentions;

    for (auto [b, e] : clause_spans(question)) {
        mentions.push_back({question.substr(b, e - b), b, e,
                            EntityMention::Source::fallback_heuristic});
    }

    // capitalized-word runs, leading stopwords discarded
    struct Word {
        std::size_t begin, end;
        bool capitalized;
    };
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < question.size()) {
        while (i < question.size() && is_ascii_space(question[i])) ++i;
        if (i >= question.size()) break;
        std::size_t begin = i;
        while (i < question.size() && !is_ascii_space(question[i])) ++i;
        words.push_back({begin, i, is_ascii_upper(question[begin])});
    }

    auto word_text = [&](const Word& w) { return question.substr(w.begin, w.end - w.begin); };
    auto core_of = [&](const Word& w) {
        std::string text = word_text(w);
        std::size_t b = 0, e = text.size();
        while (b < e && !std::isalnum(static_cast<unsigned char>(text[b]))) ++b;
        while (e > b && !std::isalnum(static_cast<unsigned char>(text[e - 1]))) --e;
        return text.substr(b, e - b);
    };

    std::size_t w = 0;
    while (w < words.size()) {
        if (!words[w].capitalized) {
            ++w;
            continue;
        }
        std::size_t run_end = w;
        while (run_end + 1 < words.size() && words[run_end + 1].capitalized) ++run_end;

        std::size_t first = w;
        while (first <= run_end && is_mention_stopword(casefold(core_of(words[first])))) ++first;

        if (first <= run_end) {
            std::size_t begin = words[first].begin;
            std::size_t end = words[run_end].end;
            while (end > begin && !std::isalnum(static_cast<unsigned char>(question[end - 1]))) --end;
            if (end > begin && !overlaps_any(mentions, begin, end)) {
                mentions.push_back({question.substr(begin, end - begin), begin, end,
                                    EntityMention::Source::fallback_heuristic});
            }
        }
        w = run_end + 1;
    }

    // double-quoted spans
    std::size_t q = 0;
    while (q < question.size()) {
        std::size_t open = question.find('"', q);
        if (open == std::string::npos) break;
        std::size_t close = question.find('"', open + 1);
        if (close == std::string::npos) break;
        std::size_t begin = open + 1, end = close;
        if (end > begin && !overlaps_any(mentions, begin, end)) {
            mentions.push_back({question.substr(begin, end - begin), begin, end,
                                EntityMention::Source::fallback_heuristic});
        }
        q = close + 1;
    }

    std::sort(mentions.begin(), mentions.end(),
              [](const EntityMention& a, const EntityMention& b) {
                  if (a.start != b.start) return a.start < b.start;
                  return a.end < b.end;
              });
    return mentions;
}

std::vector<EntityMention> extract_mentions(const std::string& question, Providers& providers) {
    try {
        auto mentions = providers.ner->mentions(question);
        for (auto& m : mentions) m.source = EntityMention::Source::ner_provider;
        return mentions;
    } catch (const Error& e) {
        log_warn(std::string("ner provider failed, using heuristic mentions: ") + e.what());
        return heuristic_mentions(question);
    }
}

std::vector<BundleItem> fuzzy_stage(const KnowledgeGraph& graph,
                                    const std::vector<EntityMention>& mentions,
                                    std::size_t max_distance) {
    // node id -> best score across all mentions
    std::map<std::string, double> matched;
    for (const auto& mention : mentions) {
        const std::string needle = collapse_ws(mention.text);
        if (needle.empty()) continue;
        for (const auto& node : graph.nodes()) {
            const std::string name = collapse_ws(node.name);
            std::size_t longer = std::max(name.size(), needle.size());
            std::size_t shorter = std::min(name.size(), needle.size());
            if (longer - shorter > max_distance) continue;
            std::size_t d = levenshtein(name, needle);
            if (d > max_distance) continue;
            double score = 1.0 - static_cast<double>(d) / static_cast<double>(max_distance + 1);
            auto [it, inserted] = matched.emplace(node.id, score);
            if (!inserted && score > it->second) it->second = score;
        }
    }

    std::vector<BundleItem> items;
    std::unordered_set<std::string> seen;
    for (const auto& [node_id, score] : matched) {
        for (auto& edge : graph.neighborhood(node_id)) {
            if (!seen.insert(edge_key(edge)).second) continue;
            items.push_back({std::move(edge), RetrievalStage::fuzzy, score, node_id});
        }
    }
    return items;
}

RetrievalBundle retrieve(const KnowledgeGraph& graph, const std::string& question,
                         Providers& providers, const RetrievalConfig& config) {
    std::vector<BundleItem> semantic;
    std::vector<BundleItem> type_general;

    bool embeddings_usable = !config.fuzzy_only;
    if (embeddings_usable) {
        Embedding question_vec;
        try {
            auto vectors = providers.embed->embed({question});
            if (vectors.size() != 1) {
                throw ProviderError("embed", "expected 1 vector for the question");
            }
            question_vec = std::move(vectors.front());
        } catch (const Error& e) {
            log_warn(std::string("question embedding failed, fuzzy-only retrieval: ") + e.what());
            embeddings_usable = false;
        }
        if (embeddings_usable) {
            try {
                semantic = semantic_stage(graph, question_vec, config.k);
                type_general = type_stage(graph, question_vec);
            } catch (const ValidationError& e) {
                // dimension mismatch between the provider and the graph
                log_warn(std::string("embedding stages skipped: ") + e.what());
                semantic.clear();
                type_general.clear();
            }
        }
    }

    auto mentions = extract_mentions(question, providers);
    auto fuzzy = fuzzy_stage(graph, mentions, config.edit_distance_max);

    // merge with stage priority: an edge seen by an earlier stage keeps that tag
    RetrievalBundle bundle;
    bundle.question = question;
    std::unordered_set<std::string> seen;
    auto take = [&](std::vector<BundleItem>& stage_items) {
        for (auto& item : stage_items) {
            if (!seen.insert(edge_key(item.edge)).second) continue;
            bundle.items.push_back(std::move(item));
        }
    };
    take(semantic);
    take(type_general);
    take(fuzzy);

    if (config.max_bundle > 0 && bundle.items.size() > config.max_bundle) {
        std::vector<BundleItem> stages[3];
        for (auto& item : bundle.items) {
            stages[stage_priority(item.stage)].push_back(std::move(item));
        }
        const std::size_t total = stages[0].size() + stages[1].size() + stages[2].size();

        std::size_t quota[3];
        std::size_t assigned = 0;
        for (int s = 0; s < 3; ++s) {
            quota[s] = config.max_bundle * stages[s].size() / total;
            assigned += quota[s];
        }
        std::size_t leftover = config.max_bundle - assigned;
        while (leftover > 0) {
            bool gave = false;
            for (int s = 0; s < 3 && leftover > 0; ++s) {
                if (quota[s] < stages[s].size()) {
                    ++quota[s];
                    --leftover;
                    gave = true;
                }
            }
            if (!gave) break;
        }

        bundle.items.clear();
        for (int s = 0; s < 3; ++s) {
            auto& items = stages[s];
            std::sort(items.begin(), items.end(), bundle_order);
            if (quota[s] < items.size()) items.resize(quota[s]);
            bundle.items.insert(bundle.items.end(), std::make_move_iterator(items.begin()),
                                std::make_move_iterator(items.end()));
        }
    }

    std::sort(bundle.items.begin(), bundle.items.end(), bundle_order);
    return bundle;
}

}  // namespace kgqa
