#include "kgqa/qa.hpp"

#include <fstream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

using ordered_json = nlohmann::ordered_json;

bool operator==(const QAPair& a, const QAPair& b) {
    return a.qa_id == b.qa_id && a.question == b.question && a.answer == b.answer &&
           a.source_chunk == b.source_chunk && a.tags == b.tags;
}

std::vector<QAPair> load_qa_dataset(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid QA dataset JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("QA dataset must be a JSON array");

    std::vector<QAPair> pairs;
    pairs.reserve(doc.size());
    std::map<std::string, std::size_t> seen;
    std::vector<std::string> duplicates;

    std::size_t index = 0;
    for (const auto& item : doc) {
        ++index;
        if (!item.is_object())
            throw ParseError("QA entry #" + std::to_string(index) + " is not an object");
        QAPair p;
        for (const char* field : {"qa_id", "question", "answer"}) {
            if (!item.contains(field) || !item.at(field).is_string())
                throw ParseError("QA entry #" + std::to_string(index) +
                                 " is missing string field '" + field + "'");
        }
        p.qa_id = item.at("qa_id").get<std::string>();
        p.question = item.at("question").get<std::string>();
        p.answer = item.at("answer").get<std::string>();
        if (p.qa_id.empty() || trim(p.question).empty() || trim(p.answer).empty())
            throw ValidationError("QA entry #" + std::to_string(index) +
                                  " has an empty qa_id, question, or answer");
        if (item.contains("source_chunk") && !item.at("source_chunk").is_null())
            p.source_chunk = item.at("source_chunk").get<std::string>();
        if (item.contains("tags") && !item.at("tags").is_null()) {
            if (!item.at("tags").is_array())
                throw ParseError("QA entry #" + std::to_string(index) + " has non-array tags");
            for (const auto& t : item.at("tags")) p.tags.push_back(t.get<std::string>());
        }
        if (auto [it, fresh] = seen.emplace(p.qa_id, index); !fresh)
            duplicates.push_back(p.qa_id);
        pairs.push_back(std::move(p));
    }

    if (!duplicates.empty()) {
        std::string msg = "duplicate qa_id values:";
        for (const auto& d : duplicates) msg += " '" + d + "'";
        throw ValidationError(msg);
    }
    return pairs;
}

std::vector<QAPair> load_qa_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_qa_dataset(in);
}

void save_qa_dataset(const std::vector<QAPair>& pairs, std::ostream& out) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : pairs) {
        ordered_json j;
        j["qa_id"] = p.qa_id;
        j["question"] = p.question;
        j["answer"] = p.answer;
        if (p.source_chunk) j["source_chunk"] = *p.source_chunk;
        if (!p.tags.empty()) j["tags"] = p.tags;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
    if (!out) throw IoError("failed while writing QA dataset");
}

void save_qa_dataset_file(const std::vector<QAPair>& pairs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_qa_dataset(pairs, out);
}

QAGenReport generate_qa(const std::vector<Chunk>& chunks, QAGenProvider& provider) {
    QAGenReport report;
    for (const auto& chunk : chunks) {
        std::vector<QAPair> raw;
        try {
            raw = provider.generate(chunk);
        } catch (const Error& e) {
            report.failed_chunks.push_back(chunk.chunk_id);
            continue;
        }
        std::size_t counter = 0;
        for (auto& p : raw) {
            if (trim(p.question).empty() || trim(p.answer).empty()) {
                ++report.dropped;
                continue;
            }
            ++counter;
            p.qa_id = chunk.chunk_id + "-q" + std::to_string(counter);
            p.source_chunk = chunk.chunk_id;
            report.pairs.push_back(std::move(p));
        }
    }
    return report;
}

}  // namespace kgqa
