#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kgqa/graph.hpp"
#include "kgqa/qa.hpp"

namespace kgqa {

class ExtractionProvider;

// Instruction string sent verbatim with every extraction request.
inline constexpr std::string_view kExtractionInstructions =
    "Clauses and Numerical Values, etc count as nodes";

inline constexpr std::size_t kDefaultBatchSize = 20;

struct ExtractionBatch {
    std::size_t batch_index = 0;
    std::vector<QAPair> pairs;
    std::string rendered_prompt_context;
};

struct ExtractedTriple {
    std::string subject_name;
    std::string subject_type;
    std::string predicate;
    std::string object_name;
    std::string object_type;
    std::string source_qa;
};

// Partitions pairs in order into ceil(n / batch_size) batches; the final batch
// may be shorter. batch_size must be >= 1.
std::vector<ExtractionBatch> make_batches(std::vector<QAPair> pairs,
                                          std::size_t batch_size = kDefaultBatchSize);

struct TripleBatchResult {
    std::vector<ExtractedTriple> triples;
    std::size_t dropped = 0;  // triples discarded for an empty field
};

// Runs one batch through the provider and normalizes the result: fields are
// trimmed, predicates upper-snake-cased, and triples with any empty field (or
// no source_qa) are dropped and counted. Provider errors propagate.
TripleBatchResult extract_triples(const ExtractionBatch& batch, ExtractionProvider& provider);

struct ExtractionRun {
    std::vector<ExtractedTriple> triples;
    std::size_t dropped = 0;
    std::vector<std::size_t> failed_batches;
};

// Extracts every batch; a batch whose provider call fails is recorded and
// skipped so the rest of the corpus still builds.
ExtractionRun extract_all(const std::vector<ExtractionBatch>& batches,
                          ExtractionProvider& provider, std::size_t threads = 0);

struct ApplyReport {
    std::size_t nodes_added = 0;
    std::size_t edges_added = 0;
    std::size_t duplicates_skipped = 0;  // edge insertions that were no-ops
};

ApplyReport apply_triples(KnowledgeGraph& graph, const std::vector<ExtractedTriple>& triples);

}  // namespace kgqa
