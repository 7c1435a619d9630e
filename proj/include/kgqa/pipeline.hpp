#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kgqa/config.hpp"
#include "kgqa/extract.hpp"
#include "kgqa/graph.hpp"

namespace kgqa {

struct Providers;

struct IngestReport {
    std::size_t chunks = 0;
    std::size_t qa_pairs = 0;
    std::size_t dropped_pairs = 0;
    std::vector<std::string> failed_chunks;
    std::size_t triples = 0;
    std::size_t dropped_triples = 0;
    std::vector<std::size_t> failed_batches;
    ApplyReport applied;
    std::size_t vectors_written = 0;
};

// Document -> chunks -> QA pairs -> triples -> graph, then embeds whatever
// the graph is still missing. Chunk ids are prefixed with a hash of the
// document so provenance stays unambiguous when several documents land in the
// same graph. Per-chunk and per-batch provider failures degrade and are
// reported; an embedding failure is an error (the graph would be unsearchable).
IngestReport ingest_document(KnowledgeGraph& graph, std::string_view document,
                             Providers& providers, const PipelineConfig& config = {});

// QA pairs -> triples -> graph -> embeddings, the tail of ingest_document.
// Used when the corpus is already a QA dataset.
IngestReport build_from_pairs(KnowledgeGraph& graph, std::vector<QAPair> pairs,
                              Providers& providers, const PipelineConfig& config = {});

}  // namespace kgqa
