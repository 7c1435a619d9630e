#include "kgqa/pipeline.hpp"

#include <utility>

#include "kgqa/embedding.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/qa.hpp"
#include "kgqa/segment.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

IngestReport ingest_document(KnowledgeGraph& graph, std::string_view document,
                             Providers& providers, const PipelineConfig& config) {
    SegmentationPolicy policy;
    policy.max_chars = config.ingest.max_chars;
    policy.min_chars = config.ingest.min_chars;

    std::vector<Chunk> chunks = segment(document, policy);
    const std::string doc_tag = to_hex16(fnv1a64(document)).substr(0, 6);
    for (auto& chunk : chunks) chunk.chunk_id = doc_tag + "-" + chunk.chunk_id;

    QAGenReport generated = generate_qa(chunks, *providers.qa_gen);

    IngestReport report = build_from_pairs(graph, std::move(generated.pairs), providers, config);
    report.chunks = chunks.size();
    report.dropped_pairs = generated.dropped;
    report.failed_chunks = std::move(generated.failed_chunks);
    return report;
}

IngestReport build_from_pairs(KnowledgeGraph& graph, std::vector<QAPair> pairs,
                              Providers& providers, const PipelineConfig& config) {
    IngestReport report;
    report.qa_pairs = pairs.size();

    auto batches = make_batches(std::move(pairs), config.batch_size);
    ExtractionRun run = extract_all(batches, *providers.extract, config.threads);
    report.triples = run.triples.size();
    report.dropped_triples = run.dropped;
    report.failed_batches = std::move(run.failed_batches);

    report.applied = apply_triples(graph, run.triples);
    report.vectors_written = embed_all(graph, *providers.embed);
    return report;
}

}  // namespace kgqa
