#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kgqa/segment.hpp"

namespace kgqa {

class QAGenProvider;

struct QAPair {
    std::string qa_id;
    std::string question;
    std::string answer;
    std::optional<std::string> source_chunk;
    std::vector<std::string> tags;
};

bool operator==(const QAPair& a, const QAPair& b);

// QA dataset file: a JSON array of {"qa_id","question","answer",
// "source_chunk"?,"tags"?} objects. Order is preserved; qa_id must be unique.
std::vector<QAPair> load_qa_dataset(std::istream& in);
std::vector<QAPair> load_qa_dataset_file(const std::string& path);
void save_qa_dataset(const std::vector<QAPair>& pairs, std::ostream& out);
void save_qa_dataset_file(const std::vector<QAPair>& pairs, const std::string& path);

struct QAGenReport {
    std::vector<QAPair> pairs;
    std::size_t dropped = 0;  // provider pairs with an empty question or answer
    std::vector<std::string> failed_chunks;
};

// Runs the QA-generation provider over every chunk. Pairs inherit the chunk id
// as source_chunk and get deterministic ids "<chunk_id>-q<N>". Provider
// failures are recorded per chunk and the run continues; result order always
// follows chunk order.
QAGenReport generate_qa(const std::vector<Chunk>& chunks, QAGenProvider& provider);

}  // namespace kgqa
