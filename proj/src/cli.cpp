#include "kgqa/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kgqa/answer.hpp"
#include "kgqa/config.hpp"
#include "kgqa/embedding.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/eval.hpp"
#include "kgqa/graph.hpp"
#include "kgqa/pipeline.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/qa.hpp"
#include "kgqa/segment.hpp"
#include "kgqa/server.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

PipelineConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return parse_config_file(path);
}

std::string resolve_path(const std::string& flag_value, const std::string& config_value,
                         const char* what, const char* config_key) {
    if (!flag_value.empty()) return flag_value;
    if (!config_value.empty()) return config_value;
    throw ValidationError(std::string("no ") + what + " given (pass the flag or set " +
                          config_key + " in the config file)");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void print_json(const ordered_json& value) { std::cout << value.dump(2) << '\n'; }

ordered_json ingest_report_json(const IngestReport& report) {
    ordered_json failed_batches = ordered_json::array();
    for (auto index : report.failed_batches) failed_batches.push_back(index);
    return ordered_json{{"chunks", report.chunks},
                        {"qa_pairs", report.qa_pairs},
                        {"dropped_pairs", report.dropped_pairs},
                        {"failed_chunks", report.failed_chunks},
                        {"triples", report.triples},
                        {"dropped_triples", report.dropped_triples},
                        {"failed_batches", std::move(failed_batches)},
                        {"nodes_added", report.applied.nodes_added},
                        {"edges_added", report.applied.edges_added},
                        {"duplicates_skipped", report.applied.duplicates_skipped},
                        {"vectors_written", report.vectors_written}};
}

struct IngestOpts {
    std::string config_path;
    std::string in_path;
    std::string out_path;
    bool json = false;
};

int cmd_ingest(const IngestOpts& opts) {
    PipelineConfig config = load_config(opts.config_path);
    const std::string out_path =
        resolve_path(opts.out_path, config.paths.qa_file, "output QA file", "paths.qa_file");

    const std::string document = read_text_file(opts.in_path);
    SegmentationPolicy policy;
    policy.max_chars = config.ingest.max_chars;
    policy.min_chars = config.ingest.min_chars;
    std::vector<Chunk> chunks = segment(document, policy);
    const std::string doc_tag = to_hex16(fnv1a64(document)).substr(0, 6);
    for (auto& chunk : chunks) chunk.chunk_id = doc_tag + "-" + chunk.chunk_id;

    Providers providers = make_providers(config);
    QAGenReport report = generate_qa(chunks, *providers.qa_gen);
    save_qa_dataset_file(report.pairs, out_path);

    if (opts.json) {
        print_json(ordered_json{{"chunks", chunks.size()},
                                {"qa_pairs", report.pairs.size()},
                                {"dropped_pairs", report.dropped},
                                {"failed_chunks", report.failed_chunks},
                                {"out", out_path}});
    } else {
        std::cout << "chunks: " << chunks.size() << '\n';
        std::cout << "qa pairs: " << report.pairs.size() << " (" << report.dropped
                  << " dropped)\n";
        if (!report.failed_chunks.empty()) {
            std::cout << "failed chunks:";
            for (const auto& id : report.failed_chunks) std::cout << ' ' << id;
            std::cout << '\n';
        }
        std::cout << "wrote qa dataset: " << out_path << '\n';
    }
    return 0;
}

struct BuildGraphOpts {
    std::string config_path;
    std::string qa_path;
    std::string graph_path;
    std::size_t batch_size = 0;  // 0: use config
    bool no_embed = false;
    bool json = false;
};

int cmd_build_graph(const BuildGraphOpts& opts) {
    PipelineConfig config = load_config(opts.config_path);
    if (opts.batch_size > 0) config.batch_size = opts.batch_size;
    const std::string qa_path =
        resolve_path(opts.qa_path, config.paths.qa_file, "QA dataset", "paths.qa_file");
    const std::string graph_path = resolve_path(opts.graph_path, config.paths.graph_file,
                                                "output graph file", "paths.graph_file");

    std::vector<QAPair> pairs = load_qa_dataset_file(qa_path);
    Providers providers = make_providers(config);

    KnowledgeGraph graph;
    IngestReport report;
    report.qa_pairs = pairs.size();
    if (opts.no_embed) {
        auto batches = make_batches(std::move(pairs), config.batch_size);
        ExtractionRun run = extract_all(batches, *providers.extract, config.threads);
        report.triples = run.triples.size();
        report.dropped_triples = run.dropped;
        report.failed_batches = std::move(run.failed_batches);
        report.applied = apply_triples(graph, run.triples);
    } else {
        report = build_from_pairs(graph, std::move(pairs), providers, config);
    }
    graph.save_file(graph_path);

    if (opts.json) {
        ordered_json out = ingest_report_json(report);
        out.erase("chunks");
        out["nodes"] = graph.node_count();
        out["edges"] = graph.edge_count();
        out["types"] = graph.type_count();
        out["graph"] = graph_path;
        print_json(out);
    } else {
        std::cout << "qa pairs: " << report.qa_pairs << '\n';
        std::cout << "triples: " << report.triples << " applied, " << report.dropped_triples
                  << " dropped, " << report.failed_batches.size() << " failed batches\n";
        std::cout << "graph: " << graph.node_count() << " nodes, " << graph.edge_count()
                  << " edges, " << graph.type_count() << " types\n";
        if (!opts.no_embed) {
            std::cout << "embeddings: " << report.vectors_written << " vectors";
            if (graph.embedding_dim()) std::cout << " (dim " << *graph.embedding_dim() << ")";
            std::cout << '\n';
        }
        std::cout << "wrote graph: " << graph_path << '\n';
    }
    return 0;
}

struct EmbedOpts {
    std::string config_path;
    std::string graph_path;
    std::string out_path;
    bool json = false;
};

int cmd_embed(const EmbedOpts& opts) {
    PipelineConfig config = load_config(opts.config_path);
    const std::string graph_path =
        resolve_path(opts.graph_path, config.paths.graph_file, "graph file", "paths.graph_file");
    const std::string out_path = opts.out_path.empty() ? graph_path : opts.out_path;

    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    Providers providers = make_providers(config);
    std::size_t written = embed_all(graph, *providers.embed);
    graph.save_file(out_path);

    if (opts.json) {
        auto dim = graph.embedding_dim();
        print_json(ordered_json{{"vectors_written", written},
                                {"embedding_dim", dim ? json(*dim) : json(nullptr)},
                                {"graph", out_path}});
    } else {
        std::cout << "embeddings: " << written << " vectors written";
        if (graph.embedding_dim()) std::cout << " (dim " << *graph.embedding_dim() << ")";
        std::cout << '\n';
        std::cout << "wrote graph: " << out_path << '\n';
    }
    return 0;
}

struct QueryOpts {
    std::string config_path;
    std::string graph_path;
    std::string question;
    std::size_t k = 0;
    std::size_t top_n = 0;
    bool fuzzy_only = false;
    bool json = false;
};

int cmd_query(const QueryOpts& opts) {
    PipelineConfig config = load_config(opts.config_path);
    const std::string graph_path =
        resolve_path(opts.graph_path, config.paths.graph_file, "graph file", "paths.graph_file");
    if (trim(opts.question).empty()) throw ValidationError("question must not be empty");

    RetrievalConfig retrieval = config.retrieval;
    SynthesisConfig synthesis = config.synthesis;
    if (opts.k > 0) retrieval.k = opts.k;
    if (opts.top_n > 0) synthesis.top_n = opts.top_n;
    if (opts.fuzzy_only) retrieval.fuzzy_only = true;

    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    Providers providers = make_providers(config);
    auto candidates = answer(graph, opts.question, providers, retrieval, synthesis);

    if (opts.json) {
        ordered_json rendered = ordered_json::array();
        for (const auto& candidate : candidates) {
            ordered_json sources = ordered_json::array();
            for (const auto& edge : candidate.source_edges) {
                const EntityNode* subject = graph.find_node(edge.subject_id);
                const EntityNode* object = graph.find_node(edge.object_id);
                sources.push_back(ordered_json{
                    {"subject", subject ? subject->name : edge.subject_id},
                    {"subject_type", subject ? subject->node_type : ""},
                    {"predicate", edge.predicate},
                    {"object", object ? object->name : edge.object_id},
                    {"object_type", object ? object->node_type : ""},
                    {"provenance", edge.provenance ? json(*edge.provenance) : json(nullptr)},
                });
            }
            rendered.push_back(ordered_json{{"rank", candidate.rank},
                                            {"text", candidate.text},
                                            {"rerank_score", candidate.rerank_score},
                                            {"sources", std::move(sources)}});
        }
        print_json(ordered_json{{"question", opts.question}, {"candidates", std::move(rendered)}});
    } else if (candidates.empty()) {
        std::cout << "no candidates\n";
    } else {
        std::cout.setf(std::ios::fixed);
        std::cout.precision(4);
        for (const auto& candidate : candidates) {
            std::cout << candidate.rank << ". [" << candidate.rerank_score << "] "
                      << candidate.text << '\n';
            for (const auto& edge : candidate.source_edges) {
                const EntityNode* subject = graph.find_node(edge.subject_id);
                const EntityNode* object = graph.find_node(edge.object_id);
                std::cout << "   " << (subject ? subject->name : edge.subject_id) << " -"
                          << edge.predicate << "-> " << (object ? object->name : edge.object_id);
                if (edge.provenance) std::cout << "  [" << *edge.provenance << "]";
                std::cout << '\n';
            }
        }
    }
    return 0;
}

struct EvalOpts {
    std::string config_path;
    std::string graph_path;
    std::string qa_path;
    std::string judge;
    std::string judge_cache;
    std::string out_path;
    bool paired = false;
    bool json = false;
};

int cmd_eval(const EvalOpts& opts) {
    PipelineConfig config = load_config(opts.config_path);
    const std::string graph_path =
        resolve_path(opts.graph_path, config.paths.graph_file, "graph file", "paths.graph_file");
    const std::string qa_path =
        resolve_path(opts.qa_path, config.paths.qa_file, "QA dataset", "paths.qa_file");

    if (!opts.judge.empty()) {
        // "stub" names the offline substring judge
        config.providers.judge = (opts.judge == "stub") ? "fallback" : opts.judge;
    }

    EvalConfig eval_config;
    eval_config.retrieval = config.retrieval;
    eval_config.synthesis = config.synthesis;
    if (!opts.judge_cache.empty()) {
        eval_config.judge_cache_path = opts.judge_cache;
    } else if (!config.paths.cache_dir.empty()) {
        std::filesystem::create_directories(config.paths.cache_dir);
        eval_config.judge_cache_path =
            (std::filesystem::path(config.paths.cache_dir) / "judge_cache.jsonl").string();
    }

    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    std::vector<QAPair> dataset = load_qa_dataset_file(qa_path);
    Providers providers = make_providers(config);

    ordered_json report_json;
    std::string report_text;
    if (opts.paired) {
        PairedEvalReport paired = perturb_and_reevaluate(dataset, graph, providers, eval_config);
        report_json = paired_report_to_json(paired);
        report_text = render_paired_report_text(paired);
    } else {
        EvalReport report = evaluate(dataset, graph, providers, eval_config);
        report_json = report_to_json(report);
        report_text = render_report_text(report);
    }

    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out) throw IoError("cannot write report: " + opts.out_path);
        out << report_json.dump(2) << '\n';
    }
    if (opts.json) {
        print_json(report_json);
    } else {
        std::cout << report_text;
        if (!opts.out_path.empty()) std::cout << "wrote report: " << opts.out_path << '\n';
    }
    return 0;
}

struct ServeOpts {
    std::string config_path;
    std::string graph_path;
    std::string host = "127.0.0.1";
    int port = 8080;
};

int cmd_serve(const ServeOpts& opts) {
    PipelineConfig config = load_config(opts.config_path);
    const std::string graph_path =
        resolve_path(opts.graph_path, config.paths.graph_file, "graph file", "paths.graph_file");

    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    Service service(std::move(graph), std::move(config));
    std::cout << "serving on http://" << opts.host << ":" << opts.port
              << " (POST /query, POST /ingest, GET /stats, GET /healthz)\n"
              << std::flush;
    if (!service.listen(opts.host, opts.port)) {
        throw IoError("cannot listen on " + opts.host + ":" + std::to_string(opts.port));
    }
    return 0;
}

struct StatsOpts {
    std::string graph_path;
    bool json = false;
};

int cmd_graph_stats(const StatsOpts& opts) {
    KnowledgeGraph graph = KnowledgeGraph::load_file(opts.graph_path);
    std::size_t embedded = 0;
    for (const auto& node : graph.nodes()) {
        if (node.embedding) ++embedded;
    }

    if (opts.json) {
        ordered_json types = ordered_json::array();
        for (const auto& record : graph.type_records()) {
            types.push_back(ordered_json{{"type", record.type_name},
                                         {"members", record.member_count},
                                         {"embedded", record.embedding.has_value()}});
        }
        auto dim = graph.embedding_dim();
        print_json(ordered_json{{"nodes", graph.node_count()},
                                {"edges", graph.edge_count()},
                                {"types", graph.type_count()},
                                {"embedded_nodes", embedded},
                                {"embedding_dim", dim ? json(*dim) : json(nullptr)},
                                {"type_records", std::move(types)}});
    } else {
        std::cout << "nodes: " << graph.node_count() << " (" << embedded << " embedded)\n";
        std::cout << "edges: " << graph.edge_count() << '\n';
        std::cout << "types: " << graph.type_count() << '\n';
        if (graph.embedding_dim()) {
            std::cout << "embedding dim: " << *graph.embedding_dim() << '\n';
        }
        for (const auto& record : graph.type_records()) {
            std::cout << "  " << record.type_name << ": " << record.member_count << " nodes\n";
        }
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"knowledge-graph question answering over contract-style documents"};
    app.require_subcommand(1);

    IngestOpts ingest_opts;
    auto* ingest = app.add_subcommand(
        "ingest", "Segment a document and generate a QA dataset from it");
    ingest->add_option("--in", ingest_opts.in_path, "input document (plain text)")
        ->required();
    ingest->add_option("--out", ingest_opts.out_path, "output QA dataset (JSON)");
    ingest->add_option("--config", ingest_opts.config_path, "pipeline config file");
    ingest->add_flag("--json", ingest_opts.json, "print a JSON summary");

    BuildGraphOpts build_opts;
    auto* build = app.add_subcommand(
        "build-graph", "Extract triples from a QA dataset and write the graph");
    build->add_option("--qa", build_opts.qa_path, "QA dataset (JSON)");
    build->add_option("--graph", build_opts.graph_path, "output graph file (JSON Lines)");
    build->add_option("--batch-size", build_opts.batch_size, "QA pairs per extraction request");
    build->add_flag("--no-embed", build_opts.no_embed, "skip the embedding pass");
    build->add_option("--config", build_opts.config_path, "pipeline config file");
    build->add_flag("--json", build_opts.json, "print a JSON summary");

    EmbedOpts embed_opts;
    auto* embed = app.add_subcommand("embed", "Embed every node and type the graph is missing");
    embed->add_option("--graph", embed_opts.graph_path, "graph file to embed");
    embed->add_option("--out", embed_opts.out_path, "write here instead of in place");
    embed->add_option("--config", embed_opts.config_path, "pipeline config file");
    embed->add_flag("--json", embed_opts.json, "print a JSON summary");

    QueryOpts query_opts;
    auto* query = app.add_subcommand("query", "Answer a question against a graph");
    query->add_option("--graph", query_opts.graph_path, "graph file");
    query->add_option("--question", query_opts.question, "question text")->required();
    query->add_option("--k", query_opts.k, "semantic matches to expand");
    query->add_option("--top-n", query_opts.top_n, "answer candidates to keep");
    query->add_flag("--fuzzy-only", query_opts.fuzzy_only, "skip the embedding stages");
    query->add_option("--config", query_opts.config_path, "pipeline config file");
    query->add_flag("--json", query_opts.json, "print the full candidate list as JSON");

    EvalOpts eval_opts;
    auto* eval = app.add_subcommand("eval", "Judge pipeline answers against a QA dataset");
    eval->add_option("--graph", eval_opts.graph_path, "graph file");
    eval->add_option("--qa", eval_opts.qa_path, "QA dataset (JSON)");
    eval->add_option("--judge", eval_opts.judge,
                     "judge endpoint: http(s) URL, \"fallback\", or \"stub\"");
    eval->add_option("--judge-cache", eval_opts.judge_cache, "judge response cache (JSON Lines)");
    eval->add_option("--out", eval_opts.out_path, "write the JSON report here");
    eval->add_flag("--paired", eval_opts.paired,
                   "also evaluate perturbed questions and report both sets");
    eval->add_option("--config", eval_opts.config_path, "pipeline config file");
    eval->add_flag("--json", eval_opts.json, "print the JSON report");

    ServeOpts serve_opts;
    auto* serve = app.add_subcommand("serve", "Serve the query pipeline over HTTP");
    serve->add_option("--graph", serve_opts.graph_path, "graph file");
    serve->add_option("--host", serve_opts.host, "bind address (default 127.0.0.1)");
    serve->add_option("--port", serve_opts.port, "port (default 8080)");
    serve->add_option("--config", serve_opts.config_path, "pipeline config file");

    StatsOpts stats_opts;
    auto* stats = app.add_subcommand("graph-stats", "Describe a graph file");
    stats->add_option("--graph", stats_opts.graph_path, "graph file")->required();
    stats->add_flag("--json", stats_opts.json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_opts);
        if (*build) return cmd_build_graph(build_opts);
        if (*embed) return cmd_embed(embed_opts);
        if (*query) return cmd_query(query_opts);
        if (*eval) return cmd_eval(eval_opts);
        if (*serve) return cmd_serve(serve_opts);
        if (*stats) return cmd_graph_stats(stats_opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace kgqa
