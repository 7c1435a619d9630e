#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "kgqa/answer.hpp"
#include "kgqa/config.hpp"
#include "kgqa/embedding.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/eval.hpp"
#include "kgqa/extract.hpp"
#include "kgqa/graph.hpp"
#include "kgqa/judge_prompt.hpp"
#include "kgqa/pipeline.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/qa.hpp"
#include "kgqa/segment.hpp"
#include "kgqa/text.hpp"

namespace py = pybind11;

namespace {

using namespace kgqa;

py::dict edge_to_dict(const KnowledgeGraph& graph, const TypedEdge& edge) {
    py::dict d;
    d["subject_id"] = edge.subject_id;
    d["predicate"] = edge.predicate;
    d["object_id"] = edge.object_id;
    const EntityNode* subject = graph.find_node(edge.subject_id);
    const EntityNode* object = graph.find_node(edge.object_id);
    d["subject"] = subject ? py::cast(subject->name) : py::none();
    d["object"] = object ? py::cast(object->name) : py::none();
    if (edge.provenance) {
        d["provenance"] = *edge.provenance;
    } else {
        d["provenance"] = py::none();
    }
    return d;
}

QAPair pair_from_dict(const py::dict& d) {
    QAPair pair;
    pair.qa_id = d["qa_id"].cast<std::string>();
    pair.question = d["question"].cast<std::string>();
    pair.answer = d["answer"].cast<std::string>();
    if (d.contains("source_chunk") && !d["source_chunk"].is_none()) {
        pair.source_chunk = d["source_chunk"].cast<std::string>();
    }
    if (d.contains("tags")) pair.tags = d["tags"].cast<std::vector<std::string>>();
    return pair;
}

std::vector<QAPair> pairs_from_list(const py::list& items) {
    std::vector<QAPair> pairs;
    pairs.reserve(items.size());
    for (const auto& item : items) pairs.push_back(pair_from_dict(item.cast<py::dict>()));
    return pairs;
}

py::dict ingest_report_to_dict(const IngestReport& report) {
    py::dict d;
    d["chunks"] = report.chunks;
    d["qa_pairs"] = report.qa_pairs;
    d["dropped_pairs"] = report.dropped_pairs;
    d["failed_chunks"] = report.failed_chunks;
    d["triples"] = report.triples;
    d["dropped_triples"] = report.dropped_triples;
    d["failed_batches"] = report.failed_batches;
    d["nodes_added"] = report.applied.nodes_added;
    d["edges_added"] = report.applied.edges_added;
    d["duplicates_skipped"] = report.applied.duplicates_skipped;
    d["vectors_written"] = report.vectors_written;
    return d;
}

py::dict eval_report_to_dict(const EvalReport& report) {
    py::dict d;
    d["judge"] = report.judge_name;
    d["total_questions"] = report.total_questions;
    d["valid_questions"] = report.valid_questions;
    d["invalid_questions"] = report.invalid_questions;
    d["correct"] = report.correct;
    d["incorrect"] = report.incorrect;
    d["unparseable"] = report.unparseable;
    d["accuracy"] = report.accuracy ? py::cast(*report.accuracy) : py::none();
    py::list rows;
    for (const auto& row : report.rows) {
        py::dict r;
        r["qa_id"] = row.qa_id;
        r["question"] = row.question;
        r["expected"] = row.expected;
        r["predicted"] = row.predicted;
        r["verdict"] = std::string(to_string(row.verdict));
        rows.append(std::move(r));
    }
    d["rows"] = std::move(rows);
    return d;
}

// Owns one provider bundle plus the pipeline settings, the unit of work the
// CLI and HTTP service also build around.
class Pipeline {
public:
    explicit Pipeline(const std::string& config_path) {
        if (!config_path.empty()) config_ = parse_config_file(config_path);
        providers_ = make_providers(config_);
    }

    py::dict ingest(KnowledgeGraph& graph, const std::string& text) {
        return ingest_report_to_dict(ingest_document(graph, text, providers_, config_));
    }

    py::dict build_from_qa(KnowledgeGraph& graph, const py::list& pairs) {
        return ingest_report_to_dict(
            build_from_pairs(graph, pairs_from_list(pairs), providers_, config_));
    }

    py::list answer_question(const KnowledgeGraph& graph, const std::string& question,
                             std::optional<std::size_t> k, std::optional<std::size_t> top_n,
                             bool fuzzy_only) {
        RetrievalConfig retrieval = config_.retrieval;
        SynthesisConfig synthesis = config_.synthesis;
        if (k) retrieval.k = *k;
        if (top_n) synthesis.top_n = *top_n;
        if (fuzzy_only) retrieval.fuzzy_only = true;

        py::list out;
        for (const auto& candidate : answer(graph, question, providers_, retrieval, synthesis)) {
            py::dict d;
            d["rank"] = candidate.rank;
            d["text"] = candidate.text;
            d["rerank_score"] = candidate.rerank_score;
            py::list sources;
            for (const auto& edge : candidate.source_edges) {
                sources.append(edge_to_dict(graph, edge));
            }
            d["sources"] = std::move(sources);
            out.append(std::move(d));
        }
        return out;
    }

    py::dict evaluate_pairs(const KnowledgeGraph& graph, const py::list& pairs,
                            std::optional<std::string> judge_cache) {
        EvalConfig eval_config;
        eval_config.retrieval = config_.retrieval;
        eval_config.synthesis = config_.synthesis;
        eval_config.judge_cache_path = std::move(judge_cache);
        return eval_report_to_dict(
            evaluate(pairs_from_list(pairs), graph, providers_, eval_config));
    }

private:
    PipelineConfig config_;
    Providers providers_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "knowledge-graph question answering core";

    py::register_exception<Error>(m, "Error");

    py::class_<KnowledgeGraph>(m, "KnowledgeGraph")
        .def(py::init<>())
        .def_static("load", &KnowledgeGraph::load_file, py::arg("path"))
        .def("save", &KnowledgeGraph::save_file, py::arg("path"))
        .def(
            "upsert_node",
            [](KnowledgeGraph& g, const std::string& name, const std::string& node_type) {
                return g.upsert_node(name, node_type).id;
            },
            py::arg("name"), py::arg("node_type"))
        .def(
            "insert_edge",
            [](KnowledgeGraph& g, const std::string& subject_id, const std::string& predicate,
               const std::string& object_id, std::optional<std::string> provenance) {
                return g.insert_edge({subject_id, predicate, object_id, std::move(provenance)});
            },
            py::arg("subject_id"), py::arg("predicate"), py::arg("object_id"),
            py::arg("provenance") = std::nullopt)
        .def("neighborhood",
             [](const KnowledgeGraph& g, const std::string& node_id) {
                 py::list out;
                 for (const auto& edge : g.neighborhood(node_id)) {
                     out.append(edge_to_dict(g, edge));
                 }
                 return out;
             })
        .def("nodes",
             [](const KnowledgeGraph& g) {
                 py::list out;
                 for (const auto& node : g.nodes()) {
                     py::dict d;
                     d["id"] = node.id;
                     d["name"] = node.name;
                     d["node_type"] = node.node_type;
                     d["has_embedding"] = node.embedding.has_value();
                     out.append(std::move(d));
                 }
                 return out;
             })
        .def("type_records",
             [](const KnowledgeGraph& g) {
                 py::list out;
                 for (const auto& record : g.type_records()) {
                     py::dict d;
                     d["type_name"] = record.type_name;
                     d["member_count"] = record.member_count;
                     d["has_embedding"] = record.embedding.has_value();
                     out.append(std::move(d));
                 }
                 return out;
             })
        .def_property_readonly("node_count", &KnowledgeGraph::node_count)
        .def_property_readonly("edge_count", &KnowledgeGraph::edge_count)
        .def_property_readonly("type_count", &KnowledgeGraph::type_count)
        .def_property_readonly("embedding_dim",
                               [](const KnowledgeGraph& g) -> py::object {
                                   auto dim = g.embedding_dim();
                                   return dim ? py::cast(*dim) : py::none();
                               })
        .def_static("node_id_for", &KnowledgeGraph::node_id_for, py::arg("name"),
                    py::arg("node_type"))
        .def("__eq__",
             [](const KnowledgeGraph& a, const KnowledgeGraph& b) { return a == b; })
        .def("__len__", &KnowledgeGraph::node_count);

    py::class_<Pipeline>(m, "Pipeline")
        .def(py::init<const std::string&>(), py::arg("config_path") = std::string(),
             "All-fallback providers unless a config file points at HTTP endpoints.")
        .def("ingest", &Pipeline::ingest, py::arg("graph"), py::arg("text"))
        .def("build_from_qa", &Pipeline::build_from_qa, py::arg("graph"), py::arg("pairs"))
        .def("answer", &Pipeline::answer_question, py::arg("graph"), py::arg("question"),
             py::arg("k") = std::nullopt, py::arg("top_n") = std::nullopt,
             py::arg("fuzzy_only") = false)
        .def("evaluate", &Pipeline::evaluate_pairs, py::arg("graph"), py::arg("pairs"),
             py::arg("judge_cache") = std::nullopt);

    m.def(
        "segment",
        [](const std::string& text, std::size_t max_chars, std::size_t min_chars) {
            SegmentationPolicy policy;
            policy.max_chars = max_chars;
            policy.min_chars = min_chars;
            py::list out;
            for (const auto& chunk : segment(text, policy)) {
                py::dict d;
                d["chunk_id"] = chunk.chunk_id;
                d["text"] = chunk.text;
                d["start_offset"] = chunk.start_offset;
                d["end_offset"] = chunk.end_offset;
                d["cue"] = std::string(to_string(chunk.cue));
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("text"), py::arg("max_chars") = 1200, py::arg("min_chars") = 80);

    m.def("levenshtein",
          [](const std::string& a, const std::string& b) { return levenshtein(a, b); });
    m.def("cosine", &cosine, py::arg("a"), py::arg("b"));
    m.def("embed_text", &FallbackEmbedder::embed_one, py::arg("text"),
          "Deterministic offline embedding (256-dim character 3-gram hash).");
    m.def("render_judge_prompt", &render_judge_prompt, py::arg("question"), py::arg("expected"),
          py::arg("predicted"));
    m.def("parse_verdict",
          [](const std::string& raw) { return std::string(to_string(parse_verdict(raw))); });
    m.def("perturb_question", [](const std::string& question) {
        PerturbedQuestion p = fallback_perturb(question);
        return py::make_tuple(p.text, p.changed);
    });

    m.attr("EXTRACTION_INSTRUCTIONS") = std::string(kExtractionInstructions);
    m.attr("JUDGE_PROMPT_VERSION") = std::string(kJudgePromptVersion);
    m.attr("FALLBACK_EMBEDDING_DIM") = kFallbackEmbeddingDim;
    m.attr("DEFAULT_BATCH_SIZE") = kDefaultBatchSize;
    m.attr("__version__") = "0.1.0";
}
