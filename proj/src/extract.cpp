#include "kgqa/extract.hpp"

#include <mutex>
#include <sstream>
#include <utility>

#include "kgqa/errors.hpp"
#include "kgqa/parallel.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

std::vector<ExtractionBatch> make_batches(std::vector<QAPair> pairs, std::size_t batch_size) {
    if (batch_size == 0) throw ValidationError("batch_size must be at least 1");

    std::vector<ExtractionBatch> batches;
    batches.reserve((pairs.size() + batch_size - 1) / batch_size);
    for (std::size_t begin = 0; begin < pairs.size(); begin += batch_size) {
        std::size_t end = std::min(begin + batch_size, pairs.size());
        ExtractionBatch batch;
        batch.batch_index = batches.size();
        batch.pairs.assign(std::make_move_iterator(pairs.begin() + static_cast<std::ptrdiff_t>(begin)),
                           std::make_move_iterator(pairs.begin() + static_cast<std::ptrdiff_t>(end)));

        std::ostringstream context;
        context << kExtractionInstructions << "\n";
        for (const auto& pair : batch.pairs) {
            context << "\nQ: " << pair.question << "\nA: " << pair.answer << "\n";
        }
        batch.rendered_prompt_context = context.str();
        batches.push_back(std::move(batch));
    }
    return batches;
}

TripleBatchResult extract_triples(const ExtractionBatch& batch, ExtractionProvider& provider) {
    TripleBatchResult result;
    std::vector<ExtractedTriple> raw = provider.extract(batch);
    result.triples.reserve(raw.size());
    for (auto& triple : raw) {
        ExtractedTriple t;
        t.subject_name = std::string(trim(triple.subject_name));
        t.subject_type = std::string(trim(triple.subject_type));
        t.predicate = to_upper_snake(triple.predicate);
        t.object_name = std::string(trim(triple.object_name));
        t.object_type = std::string(trim(triple.object_type));
        t.source_qa = std::string(trim(triple.source_qa));
        if (t.subject_name.empty() || t.subject_type.empty() || t.predicate.empty() ||
            t.object_name.empty() || t.object_type.empty() || t.source_qa.empty()) {
            ++result.dropped;
            continue;
        }
        result.triples.push_back(std::move(t));
    }
    return result;
}

ExtractionRun extract_all(const std::vector<ExtractionBatch>& batches,
                          ExtractionProvider& provider, std::size_t threads) {
    std::vector<TripleBatchResult> results(batches.size());
    std::vector<bool> failed(batches.size(), false);
    std::vector<std::string> messages(batches.size());

    for_each_index(batches.size(), threads == 0 ? 1 : threads, [&](std::size_t i) {
        try {
            results[i] = extract_triples(batches[i], provider);
        } catch (const Error& e) {
            failed[i] = true;
            messages[i] = e.what();
        }
    });

    ExtractionRun run;
    for (std::size_t i = 0; i < batches.size(); ++i) {
        if (failed[i]) {
            run.failed_batches.push_back(batches[i].batch_index);
            log_warn("extraction batch " + std::to_string(batches[i].batch_index) +
                     " failed and was skipped: " + messages[i]);
            continue;
        }
        run.dropped += results[i].dropped;
        run.triples.insert(run.triples.end(), std::make_move_iterator(results[i].triples.begin()),
                           std::make_move_iterator(results[i].triples.end()));
    }
    return run;
}

ApplyReport apply_triples(KnowledgeGraph& graph, const std::vector<ExtractedTriple>& triples) {
    ApplyReport report;
    for (const auto& triple : triples) {
        std::size_t before = graph.node_count();
        const EntityNode& subject = graph.upsert_node(triple.subject_name, triple.subject_type);
        const std::string subject_id = subject.id;
        const EntityNode& object = graph.upsert_node(triple.object_name, triple.object_type);
        const std::string object_id = object.id;
        report.nodes_added += graph.node_count() - before;

        TypedEdge edge;
        edge.subject_id = subject_id;
        edge.predicate = triple.predicate;
        edge.object_id = object_id;
        edge.provenance = triple.source_qa;
        if (graph.insert_edge(std::move(edge))) {
            ++report.edges_added;
        } else {
            ++report.duplicates_skipped;
        }
    }
    return report;
}

}  // namespace kgqa
