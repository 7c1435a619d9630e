#include "kgqa/server.hpp"

#include <functional>
#include <mutex>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kgqa/answer.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/pipeline.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, ordered_json{{"error", message}});
}

// Uniform exception -> status mapping for every route.
void guarded(httplib::Response& res, const std::function<void()>& body) {
    try {
        body();
    } catch (const ProviderError& e) {
        send_json(res, 502, ordered_json{{"error", e.what()}, {"step", e.step()}});
    } catch (const ValidationError& e) {
        send_error(res, 400, e.what());
    } catch (const ParseError& e) {
        send_error(res, 400, e.what());
    } catch (const NotFoundError& e) {
        send_error(res, 404, e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, e.what());
    }
}

json parse_body(const httplib::Request& req) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
        throw ValidationError("request body must be a JSON object");
    }
    return body;
}

std::string string_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) {
        throw ValidationError(std::string("request body needs a string '") + key + "' field");
    }
    return it->get<std::string>();
}

}  // namespace

Service::Service(KnowledgeGraph graph, PipelineConfig config)
    : graph_(std::move(graph)),
      config_(std::move(config)),
      providers_(make_providers(config_)),
      server_(std::make_unique<httplib::Server>()) {
    register_routes();
}

Service::~Service() { stop(); }

void Service::register_routes() {
    server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, ordered_json{{"status", "ok"}});
    });

    server_->Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            std::shared_lock lock(mutex_);
            std::size_t embedded = 0;
            for (const auto& node : graph_.nodes()) {
                if (node.embedding) ++embedded;
            }
            auto dim = graph_.embedding_dim();
            send_json(res, 200,
                      ordered_json{{"nodes", graph_.node_count()},
                                   {"edges", graph_.edge_count()},
                                   {"types", graph_.type_count()},
                                   {"embedded_nodes", embedded},
                                   {"embedding_dim", dim ? json(*dim) : json(nullptr)}});
        });
    });

    server_->Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            json body = parse_body(req);
            std::string question = string_field(body, "question");
            if (trim(question).empty()) throw ValidationError("'question' must not be empty");

            RetrievalConfig retrieval = config_.retrieval;
            SynthesisConfig synthesis = config_.synthesis;
            if (body.contains("k")) {
                if (!body["k"].is_number_unsigned() || body["k"].get<std::size_t>() == 0) {
                    throw ValidationError("'k' must be a positive integer");
                }
                retrieval.k = body["k"].get<std::size_t>();
            }
            if (body.contains("top_n")) {
                if (!body["top_n"].is_number_unsigned() ||
                    body["top_n"].get<std::size_t>() == 0) {
                    throw ValidationError("'top_n' must be a positive integer");
                }
                synthesis.top_n = body["top_n"].get<std::size_t>();
            }
            if (body.contains("fuzzy_only")) {
                if (!body["fuzzy_only"].is_boolean()) {
                    throw ValidationError("'fuzzy_only' must be a boolean");
                }
                retrieval.fuzzy_only = body["fuzzy_only"].get<bool>();
            }

            std::shared_lock lock(mutex_);
            auto candidates = answer(graph_, question, providers_, retrieval, synthesis);

            ordered_json rendered = ordered_json::array();
            for (const auto& candidate : candidates) {
                ordered_json sources = ordered_json::array();
                for (const auto& edge : candidate.source_edges) {
                    const EntityNode* subject = graph_.find_node(edge.subject_id);
                    const EntityNode* object = graph_.find_node(edge.object_id);
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
            send_json(res, 200,
                      ordered_json{{"question", question}, {"candidates", std::move(rendered)}});
        });
    });

    server_->Post("/ingest", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            json body = parse_body(req);
            std::string text = string_field(body, "text");

            std::unique_lock lock(mutex_);
            IngestReport report = ingest_document(graph_, text, providers_, config_);

            ordered_json failed_batches = ordered_json::array();
            for (auto index : report.failed_batches) failed_batches.push_back(index);
            send_json(res, 200,
                      ordered_json{{"chunks", report.chunks},
                                   {"qa_pairs", report.qa_pairs},
                                   {"dropped_pairs", report.dropped_pairs},
                                   {"failed_chunks", report.failed_chunks},
                                   {"triples", report.triples},
                                   {"dropped_triples", report.dropped_triples},
                                   {"failed_batches", std::move(failed_batches)},
                                   {"nodes_added", report.applied.nodes_added},
                                   {"edges_added", report.applied.edges_added},
                                   {"duplicates_skipped", report.applied.duplicates_skipped},
                                   {"vectors_written", report.vectors_written},
                                   {"nodes", graph_.node_count()},
                                   {"edges", graph_.edge_count()}});
        });
    });
}

bool Service::listen(const std::string& host, int port) {
    return server_->listen(host, port);
}

int Service::start(const std::string& host) {
    int port = server_->bind_to_any_port(host);
    if (port < 0) return -1;
    background_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

void Service::stop() {
    if (server_) server_->stop();
    if (background_.joinable()) background_.join();
}

std::size_t Service::node_count() const {
    std::shared_lock lock(mutex_);
    return graph_.node_count();
}

std::size_t Service::edge_count() const {
    std::shared_lock lock(mutex_);
    return graph_.edge_count();
}

}  // namespace kgqa
