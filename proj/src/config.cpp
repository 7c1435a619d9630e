#include "kgqa/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "kgqa/errors.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

namespace {

bool is_http_url(const std::string& value) {
    for (std::string_view scheme : {"http://", "https://"}) {
        if (value.size() > scheme.size() && value.rfind(scheme, 0) == 0 &&
            value[scheme.size()] != '/') {
            return true;
        }
    }
    return false;
}

[[noreturn]] void bad_value(std::size_t line, const std::string& key, const std::string& what) {
    throw ValidationError("line " + std::to_string(line) + ": key '" + key + "': " + what);
}

std::size_t parse_size(std::size_t line, const std::string& key, const std::string& value) {
    if (value.empty()) bad_value(line, key, "expected a non-negative integer, got an empty value");
    for (char c : value) {
        if (c < '0' || c > '9') {
            bad_value(line, key, "expected a non-negative integer, got '" + value + "'");
        }
    }
    try {
        return static_cast<std::size_t>(std::stoull(value));
    } catch (const std::exception&) {
        bad_value(line, key, "integer out of range: '" + value + "'");
    }
}

bool parse_bool(std::size_t line, const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    bad_value(line, key, "expected true or false, got '" + value + "'");
}

RerankPlacement parse_placement(std::size_t line, const std::string& key,
                                const std::string& value) {
    if (value == "after_paraphrase") return RerankPlacement::after_paraphrase;
    if (value == "before_paraphrase") return RerankPlacement::before_paraphrase;
    bad_value(line, key, "expected after_paraphrase or before_paraphrase, got '" + value + "'");
}

}  // namespace

void validate_provider_entry(const std::string& key, const std::string& value) {
    if (value == "fallback" || is_http_url(value)) return;
    throw ValidationError("key '" + key +
                          "': provider must be \"fallback\" or an http(s):// URL, got '" + value +
                          "'");
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
    return a.providers.embed == b.providers.embed && a.providers.qa_gen == b.providers.qa_gen &&
           a.providers.extract == b.providers.extract && a.providers.ner == b.providers.ner &&
           a.providers.paraphrase == b.providers.paraphrase &&
           a.providers.rerank == b.providers.rerank && a.providers.judge == b.providers.judge &&
           a.providers.perturb == b.providers.perturb && a.http.timeout_ms == b.http.timeout_ms &&
           a.http.retries == b.http.retries && a.retrieval.k == b.retrieval.k &&
           a.retrieval.edit_distance_max == b.retrieval.edit_distance_max &&
           a.retrieval.max_bundle == b.retrieval.max_bundle &&
           a.retrieval.fuzzy_only == b.retrieval.fuzzy_only &&
           a.synthesis.group_size == b.synthesis.group_size &&
           a.synthesis.rerank_placement == b.synthesis.rerank_placement &&
           a.synthesis.top_n == b.synthesis.top_n && a.ingest.max_chars == b.ingest.max_chars &&
           a.ingest.min_chars == b.ingest.min_chars &&
           a.paths.graph_file == b.paths.graph_file && a.paths.qa_file == b.paths.qa_file &&
           a.paths.cache_dir == b.paths.cache_dir && a.batch_size == b.batch_size &&
           a.threads == b.threads;
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig config;

    // key -> setter; provider entries get an extra validation pass
    std::map<std::string, std::function<void(std::size_t, const std::string&)>> setters;
    auto provider = [&](const char* key, std::string& slot) {
        setters[key] = [key, &slot](std::size_t, const std::string& value) {
            validate_provider_entry(key, value);
            slot = value;
        };
    };
    auto size_field = [&](const char* key, std::size_t& slot) {
        setters[key] = [key, &slot](std::size_t line, const std::string& value) {
            slot = parse_size(line, key, value);
        };
    };
    auto string_field = [&](const char* key, std::string& slot) {
        setters[key] = [&slot](std::size_t, const std::string& value) { slot = value; };
    };

    provider("providers.embed", config.providers.embed);
    provider("providers.qa_gen", config.providers.qa_gen);
    provider("providers.extract", config.providers.extract);
    provider("providers.ner", config.providers.ner);
    provider("providers.paraphrase", config.providers.paraphrase);
    provider("providers.rerank", config.providers.rerank);
    provider("providers.judge", config.providers.judge);
    provider("providers.perturb", config.providers.perturb);
    size_field("http.timeout_ms", config.http.timeout_ms);
    size_field("http.retries", config.http.retries);
    size_field("retrieval.k", config.retrieval.k);
    size_field("retrieval.edit_distance_max", config.retrieval.edit_distance_max);
    size_field("retrieval.max_bundle", config.retrieval.max_bundle);
    setters["retrieval.fuzzy_only"] = [&](std::size_t line, const std::string& value) {
        config.retrieval.fuzzy_only = parse_bool(line, "retrieval.fuzzy_only", value);
    };
    size_field("synthesis.group_size", config.synthesis.group_size);
    setters["synthesis.rerank_placement"] = [&](std::size_t line, const std::string& value) {
        config.synthesis.rerank_placement =
            parse_placement(line, "synthesis.rerank_placement", value);
    };
    size_field("synthesis.top_n", config.synthesis.top_n);
    size_field("ingest.max_chars", config.ingest.max_chars);
    size_field("ingest.min_chars", config.ingest.min_chars);
    string_field("paths.graph_file", config.paths.graph_file);
    string_field("paths.qa_file", config.paths.qa_file);
    string_field("paths.cache_dir", config.paths.cache_dir);
    size_field("batch_size", config.batch_size);
    size_field("threads", config.threads);

    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;

        auto eq = stripped.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + std::string(stripped) + "'");
        }
        std::string key(trim(stripped.substr(0, eq)));
        std::string value(trim(stripped.substr(eq + 1)));
        if (key.empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty key");
        }

        auto it = setters.find(key);
        if (it == setters.end()) {
            throw ValidationError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                  "'");
        }
        if (!seen.insert(key).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                                  "'");
        }
        it->second(line_no, value);
    }

    // keep a parsed config internally coherent, matching segment() rules
    if (config.ingest.max_chars == 0) {
        throw ValidationError("ingest.max_chars must be at least 1");
    }
    if (config.ingest.min_chars >= config.ingest.max_chars) {
        throw ValidationError("ingest.min_chars must be smaller than ingest.max_chars");
    }
    if (config.batch_size == 0) {
        throw ValidationError("batch_size must be at least 1");
    }
    return config;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    return parse_config(in);
}

std::string serialize_config(const PipelineConfig& config) {
    std::ostringstream out;
    out << "providers.embed = " << config.providers.embed << '\n';
    out << "providers.qa_gen = " << config.providers.qa_gen << '\n';
    out << "providers.extract = " << config.providers.extract << '\n';
    out << "providers.ner = " << config.providers.ner << '\n';
    out << "providers.paraphrase = " << config.providers.paraphrase << '\n';
    out << "providers.rerank = " << config.providers.rerank << '\n';
    out << "providers.judge = " << config.providers.judge << '\n';
    out << "providers.perturb = " << config.providers.perturb << '\n';
    out << "http.timeout_ms = " << config.http.timeout_ms << '\n';
    out << "http.retries = " << config.http.retries << '\n';
    out << "retrieval.k = " << config.retrieval.k << '\n';
    out << "retrieval.edit_distance_max = " << config.retrieval.edit_distance_max << '\n';
    out << "retrieval.max_bundle = " << config.retrieval.max_bundle << '\n';
    out << "retrieval.fuzzy_only = " << (config.retrieval.fuzzy_only ? "true" : "false") << '\n';
    out << "synthesis.group_size = " << config.synthesis.group_size << '\n';
    out << "synthesis.rerank_placement = " << to_string(config.synthesis.rerank_placement)
        << '\n';
    out << "synthesis.top_n = " << config.synthesis.top_n << '\n';
    out << "ingest.max_chars = " << config.ingest.max_chars << '\n';
    out << "ingest.min_chars = " << config.ingest.min_chars << '\n';
    out << "paths.graph_file = " << config.paths.graph_file << '\n';
    out << "paths.qa_file = " << config.paths.qa_file << '\n';
    out << "paths.cache_dir = " << config.paths.cache_dir << '\n';
    out << "batch_size = " << config.batch_size << '\n';
    out << "threads = " << config.threads << '\n';
    return out.str();
}

}  // namespace kgqa
