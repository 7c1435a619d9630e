#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "kgqa/answer.hpp"
#include "kgqa/retrieve.hpp"

namespace kgqa {

// Declarative pipeline configuration. The on-disk form is a flat
// "dotted.key = value" text file ("#" starts a comment line); see
// docs/configuration.md. Every provider entry is either an http(s) URL or the
// literal "fallback", which selects the deterministic offline implementation,
// so a default-constructed config runs fully offline.
struct ProviderEndpoints {
    std::string embed = "fallback";
    std::string extract = "fallback";
    std::string ner = "fallback";
    std::string paraphrase = "fallback";
    std::string rerank = "fallback";
    std::string judge = "fallback";
    std::string perturb = "fallback";
    std::string qa_gen = "fallback";
};

struct HttpSettings {
    std::size_t timeout_ms = 30000;
    std::size_t retries = 2;  // attempts after the first failure
};

struct IngestSettings {
    std::size_t max_chars = 1200;
    std::size_t min_chars = 80;
};

struct PathSettings {
    std::string graph_file;
    std::string qa_file;
    std::string cache_dir;
};

struct PipelineConfig {
    ProviderEndpoints providers;
    HttpSettings http;
    RetrievalConfig retrieval;
    SynthesisConfig synthesis;
    IngestSettings ingest;
    PathSettings paths;
    std::size_t batch_size = 20;
    std::size_t threads = 0;  // 0 = hardware concurrency
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

// Throws ValidationError on unknown keys, malformed values, or provider
// entries that are neither URLs nor "fallback".
PipelineConfig parse_config(std::istream& in);
PipelineConfig parse_config_file(const std::string& path);

// Emits every key in a fixed order; parse(serialize(c)) == c.
std::string serialize_config(const PipelineConfig& config);

// "fallback" or an http(s):// URL; anything else is a ValidationError.
void validate_provider_entry(const std::string& key, const std::string& value);

}  // namespace kgqa
