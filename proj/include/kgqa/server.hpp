#pragma once

#include <memory>
#include <shared_mutex>
#include <string>
#include <thread>

#include "kgqa/config.hpp"
#include "kgqa/graph.hpp"
#include "kgqa/providers.hpp"

namespace httplib {
class Server;
}

namespace kgqa {

// HTTP front end over one in-memory graph.
//
//   POST /query   {"question": ...}  read
//   POST /ingest  {"text": ...}      write (extends the graph in place)
//   GET  /stats                      read
//   GET  /healthz                    no lock
//
// Reads share the graph lock, ingest takes it exclusively, so queries keep
// serving while no ingest is running and never observe a half-applied one.
class Service {
public:
    Service(KnowledgeGraph graph, PipelineConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Serves on host:port until stop(); false when the bind fails.
    bool listen(const std::string& host, int port);

    // Binds an ephemeral port and serves on a background thread; returns the
    // port, or -1 when the bind fails. Pairs with stop().
    int start(const std::string& host);

    void stop();

    std::size_t node_count() const;
    std::size_t edge_count() const;

private:
    void register_routes();

    KnowledgeGraph graph_;
    PipelineConfig config_;
    Providers providers_;
    mutable std::shared_mutex mutex_;
    std::unique_ptr<httplib::Server> server_;
    std::thread background_;
};

}  // namespace kgqa
