#include "kgqa/providers.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <regex>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kgqa/embedding.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/eval.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

namespace {

using nlohmann::json;

struct Token {
    std::string_view text;
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<Token> split_words(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_ascii_space(s[i])) ++i;
        if (i >= s.size()) break;
        std::size_t begin = i;
        while (i < s.size() && !is_ascii_space(s[i])) ++i;
        out.push_back({s.substr(begin, i - begin), begin, i});
    }
    return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string word_core(std::string_view w) {
    std::size_t b = 0, e = w.size();
    while (b < e && !is_word_char(w[b])) ++b;
    while (e > b && !is_word_char(w[e - 1])) --e;
    return std::string(w.substr(b, e - b));
}

std::string_view drop_leading_article(std::string_view s) {
    for (std::string_view article : {"the ", "a ", "an "}) {
        if (s.size() > article.size() && casefold(s.substr(0, article.size())) == article) {
            return trim(s.substr(article.size()));
        }
    }
    return s;
}

std::string strip_outer(std::string_view s) {
    std::string_view t = trim(s);
    while (!t.empty()) {
        char c = t.back();
        if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?') {
            t.remove_suffix(1);
        } else {
            break;
        }
    }
    return std::string(trim(t));
}

const std::regex& number_with_unit_re() {
    static const std::regex re(
        R"((\d+(?:\.\d+)?)(\s*%|\s+(?:percent|days?|weeks?|months?|years?|hours?|minutes?|seconds?|euros?|dollars?|pounds?|tonnes?|kg|km|metres?|meters?)\b))",
        std::regex::icase | std::regex::optimize);
    return re;
}

bool looks_numeric(std::string_view trimmed) {
    if (trimmed.empty() || !std::isdigit(static_cast<unsigned char>(trimmed.front()))) return false;
    static const std::regex re(R"(\d+(\.\d+)?(\s*%|\s+[A-Za-z]+)?)",
                               std::regex::icase | std::regex::optimize);
    return std::regex_match(trimmed.begin(), trimmed.end(), re);
}

std::string classify_entity(std::string_view name) {
    std::string_view t = trim(name);
    auto clauses = clause_spans(t);
    if (clauses.size() == 1 && clauses.front().first == 0 && clauses.front().second == t.size()) {
        return "Clause";
    }
    if (looks_numeric(t)) return "NumericalValue";
    return "Entity";
}

struct CopularFact {
    std::string subject;
    std::string object;
};

// "The employer is responsible for X." -> {employer-ish subject, X}. The
// copula must be an interior token so both sides are non-empty.
std::optional<CopularFact> copular_split(std::string_view sentence) {
    auto tokens = split_words(sentence);
    for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
        std::string w = casefold(word_core(tokens[i].text));
        if (w != "is" && w != "are") continue;
        std::string subject = strip_outer(drop_leading_article(trim(sentence.substr(0, tokens[i].begin))));
        std::string object =
            strip_outer(drop_leading_article(trim(sentence.substr(tokens[i].end))));
        if (subject.empty() || object.empty()) return std::nullopt;
        if (subject.find('?') != std::string::npos) return std::nullopt;
        return CopularFact{std::move(subject), std::move(object)};
    }
    return std::nullopt;
}

bool is_possessive_pronoun(std::string_view word) {
    std::string w = casefold(word);
    return w == "it" || w == "he" || w == "she" || w == "that" || w == "what" || w == "there" ||
           w == "who" || w == "let" || w == "one";
}

std::string answer_anchor(const QAPair& pair) {
    std::string_view answer = pair.answer;
    for (auto [b, e] : sentence_spans(answer)) {
        if (auto fact = copular_split(answer.substr(b, e - b))) return fact->subject;
    }
    auto mentions = heuristic_mentions(pair.answer);
    if (!mentions.empty()) return mentions.front().text;
    auto tokens = split_words(answer);
    if (!tokens.empty()) return word_core(tokens.front().text);
    return std::string(trim(answer));
}

}  // namespace

// ---------------------------------------------------------------------------
// fallback embedder

Embedding FallbackEmbedder::embed_one(const std::string& text) {
    const std::string normalized = collapse_ws(text);
    const std::string padded = " " + normalized + " ";

    Embedding v(kFallbackEmbeddingDim, 0.0);
    if (padded.size() >= 3) {
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
            std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, 3));
            std::size_t bucket = static_cast<std::size_t>(h % kFallbackEmbeddingDim);
            double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
            v[bucket] += sign;
        }
    }

    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq == 0.0) {
        // signs cancelled (or the text was empty); pin one deterministic
        // bucket so the vector always has a direction
        v[static_cast<std::size_t>(fnv1a64(normalized) % kFallbackEmbeddingDim)] = 1.0;
        norm_sq = 1.0;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
}

std::vector<Embedding> FallbackEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

// ---------------------------------------------------------------------------
// fallback QA generation

std::vector<QAPair> FallbackQAGen::generate(const Chunk& chunk) {
    std::vector<QAPair> out;
    std::string_view text = chunk.text;
    for (auto [b, e] : sentence_spans(text)) {
        std::string_view sentence = text.substr(b, e - b);
        char last = sentence.back();
        if (last == '?' || last == '!') continue;

        std::string subject;
        auto mentions = heuristic_mentions(std::string(sentence));
        if (!mentions.empty()) {
            subject = mentions.front().text;
        } else {
            for (const auto& token : split_words(sentence)) {
                std::string core = word_core(token.text);
                if (core.empty() || is_mention_stopword(casefold(core))) continue;
                subject = core;
                break;
            }
        }
        if (subject.empty()) subject = "this passage";

        QAPair pair;
        pair.question = "What does the document state about " + subject + "?";
        pair.answer = std::string(sentence);
        out.push_back(std::move(pair));
    }
    return out;
}

// ---------------------------------------------------------------------------
// fallback extraction

std::vector<ExtractedTriple> extract_pair_fallback(const QAPair& pair) {
    std::vector<ExtractedTriple> out;
    auto push = [&](std::string subject, std::string subject_type, std::string predicate,
                    std::string object, std::string object_type) {
        ExtractedTriple t{std::move(subject), std::move(subject_type), std::move(predicate),
                          std::move(object), std::move(object_type), pair.qa_id};
        for (const auto& prev : out) {
            if (prev.subject_name == t.subject_name && prev.subject_type == t.subject_type &&
                prev.predicate == t.predicate && prev.object_name == t.object_name &&
                prev.object_type == t.object_type) {
                return;
            }
        }
        out.push_back(std::move(t));
    };

    std::string_view answer = pair.answer;

    for (auto [b, e] : sentence_spans(answer)) {
        if (auto fact = copular_split(answer.substr(b, e - b))) {
            push(fact->subject, classify_entity(fact->subject), "IS", fact->object,
                 classify_entity(fact->object));
        }
    }

    // possessives: "<Owner>'s <thing>"
    for (std::size_t i = 0; i + 1 < answer.size(); ++i) {
        if (answer[i] != '\'') continue;
        char s = answer[i + 1];
        if (s != 's' && s != 'S') continue;
        if (i + 2 < answer.size() && is_word_char(answer[i + 2])) continue;
        if (i == 0 || !is_word_char(answer[i - 1])) continue;

        std::size_t owner_begin = i;
        while (owner_begin > 0 && is_word_char(answer[owner_begin - 1])) --owner_begin;
        std::string_view owner_word = answer.substr(owner_begin, i - owner_begin);
        if (is_possessive_pronoun(owner_word)) continue;

        // a capitalized owner absorbs preceding capitalized words:
        // "Statkraft UK's" -> "Statkraft UK"
        std::size_t span_begin = owner_begin;
        if (is_ascii_upper(owner_word.front())) {
            while (span_begin >= 2 && answer[span_begin - 1] == ' ') {
                std::size_t prev_end = span_begin - 1;
                std::size_t prev_begin = prev_end;
                while (prev_begin > 0 && is_word_char(answer[prev_begin - 1])) --prev_begin;
                if (prev_begin == prev_end || !is_ascii_upper(answer[prev_begin])) break;
                span_begin = prev_begin;
            }
        }
        std::string owner(answer.substr(span_begin, i - span_begin));

        std::size_t j = i + 2;
        while (j < answer.size() && answer[j] == ' ') ++j;
        std::size_t thing_begin = j;
        while (j < answer.size() && is_word_char(answer[j])) ++j;
        if (j == thing_begin) continue;
        std::string thing(answer.substr(thing_begin, j - thing_begin));

        push(owner, classify_entity(owner), "HAS", thing, classify_entity(thing));
    }

    const std::string anchor = answer_anchor(pair);
    if (anchor.empty()) return out;
    const std::string anchor_type = classify_entity(anchor);

    // clause references on either side point at the answer's anchor
    for (const std::string* side : {&pair.question, &pair.answer}) {
        for (auto [b, e] : clause_spans(*side)) {
            std::string clause = side->substr(b, e - b);
            if (collapse_ws(clause) == collapse_ws(anchor)) continue;
            push(clause, "Clause", "MENTIONS", anchor, anchor_type);
        }
    }

    // numbers with units in the answer (clause identifiers excluded)
    auto clause_ranges = clause_spans(answer);
    auto begin_it = std::cregex_iterator(answer.data(), answer.data() + answer.size(),
                                         number_with_unit_re());
    for (auto it = begin_it; it != std::cregex_iterator(); ++it) {
        std::size_t match_begin = static_cast<std::size_t>(it->position(0));
        std::size_t match_end = match_begin + static_cast<std::size_t>(it->length(0));
        bool inside_clause = false;
        for (auto [cb, ce] : clause_ranges) {
            if (match_begin < ce && cb < match_end) {
                inside_clause = true;
                break;
            }
        }
        if (inside_clause) continue;

        std::string number = it->str(1);
        std::string unit = casefold(trim(it->str(2)));
        std::string value = (unit == "%") ? number + "%" : number + " " + unit;
        if (collapse_ws(value) == collapse_ws(anchor)) continue;
        push(anchor, anchor_type, "HAS_VALUE", value, "NumericalValue");
    }

    return out;
}

std::vector<ExtractedTriple> FallbackExtractor::extract(const ExtractionBatch& batch) {
    std::vector<ExtractedTriple> out;
    for (const auto& pair : batch.pairs) {
        auto triples = extract_pair_fallback(pair);
        out.insert(out.end(), std::make_move_iterator(triples.begin()),
                   std::make_move_iterator(triples.end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// remaining fallbacks

std::vector<EntityMention> FallbackNER::mentions(const std::string& text) {
    return heuristic_mentions(text);
}

std::vector<std::string> FallbackParaphraser::paraphrase(const std::vector<std::string>& texts) {
    return texts;
}

std::vector<double> FallbackReranker::rerank(const std::string& query,
                                             const std::vector<std::string>& candidates) {
    Embedding q = FallbackEmbedder::embed_one(query);
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const auto& c : candidates) scores.push_back(cosine(q, FallbackEmbedder::embed_one(c)));
    return scores;
}

std::string SubstringJudge::judge(const JudgeRequest& request) {
    // yes iff the normalized expected answer occurs verbatim inside the
    // normalized prediction (case and whitespace folded)
    std::string expected = collapse_ws(request.expected);
    std::string predicted = collapse_ws(request.predicted);
    bool yes = !expected.empty() && predicted.find(expected) != std::string::npos;
    return yes ? "Yes" : "No";
}

std::vector<std::string> FallbackPerturber::perturb(const std::vector<std::string>& questions) {
    std::vector<std::string> out;
    out.reserve(questions.size());
    for (const auto& q : questions) out.push_back(fallback_perturb(q).text);
    return out;
}

// ---------------------------------------------------------------------------
// HTTP wire clients

namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ValidationError("provider url must start with http:// or https://: '" + url + "'");
    }
    auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

json post_json(const HttpProviderConfig& cfg, const std::string& step, const json& body) {
    const SplitUrl target = split_url(cfg.url);
    const std::string payload = body.dump();
    const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);

    std::string last_error = "request failed";
    for (std::size_t attempt = 0; attempt <= cfg.retries; ++attempt) {
        httplib::Client client(target.base);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        auto res = client.Post(target.path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object()) {
            last_error = "response body is not a JSON object";
            continue;
        }
        return parsed;
    }
    throw ProviderError(step, last_error + " (" + std::to_string(cfg.retries + 1) +
                                  " attempts against " + cfg.url + ")");
}

[[noreturn]] void malformed(const std::string& step, const std::string& what) {
    throw ProviderError(step, "malformed response: " + what);
}

const json& field(const json& obj, const std::string& step, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) malformed(step, std::string("missing '") + key + "' field");
    return *it;
}

std::string http_name(const std::string& url) { return "http:" + url; }

class HttpEmbedder final : public EmbeddingProvider {
public:
    explicit HttpEmbedder(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<Embedding> embed(const std::vector<std::string>& texts) override {
        json body{{"task", "embed"}, {"texts", texts}};
        json res = post_json(cfg_, "embed", body);
        const json& vectors = field(res, "embed", "vectors");
        if (!vectors.is_array() || vectors.size() != texts.size()) {
            malformed("embed", "'vectors' must be an array with one entry per input text");
        }
        std::vector<Embedding> out;
        out.reserve(vectors.size());
        for (const auto& vec : vectors) {
            if (!vec.is_array() || vec.empty()) malformed("embed", "each vector must be a non-empty array");
            Embedding e;
            e.reserve(vec.size());
            for (const auto& x : vec) {
                if (!x.is_number()) malformed("embed", "vector entries must be numbers");
                e.push_back(x.get<double>());
            }
            out.push_back(std::move(e));
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

class HttpQAGen final : public QAGenProvider {
public:
    explicit HttpQAGen(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<QAPair> generate(const Chunk& chunk) override {
        json body{{"task", "qa_gen"}, {"chunk_id", chunk.chunk_id}, {"text", chunk.text}};
        json res = post_json(cfg_, "qa_gen", body);
        const json& pairs = field(res, "qa_gen", "pairs");
        if (!pairs.is_array()) malformed("qa_gen", "'pairs' must be an array");
        std::vector<QAPair> out;
        out.reserve(pairs.size());
        for (const auto& p : pairs) {
            if (!p.is_object() || !p.contains("question") || !p.contains("answer") ||
                !p["question"].is_string() || !p["answer"].is_string()) {
                malformed("qa_gen", "each pair needs string 'question' and 'answer'");
            }
            QAPair pair;
            pair.question = p["question"].get<std::string>();
            pair.answer = p["answer"].get<std::string>();
            out.push_back(std::move(pair));
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

class HttpExtractor final : public ExtractionProvider {
public:
    explicit HttpExtractor(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<ExtractedTriple> extract(const ExtractionBatch& batch) override {
        json pairs = json::array();
        for (const auto& p : batch.pairs) {
            pairs.push_back({{"qa_id", p.qa_id}, {"question", p.question}, {"answer", p.answer}});
        }
        json body{{"task", "extract"},
                  {"instructions", std::string(kExtractionInstructions)},
                  {"batch_index", batch.batch_index},
                  {"pairs", std::move(pairs)}};
        json res = post_json(cfg_, "extract", body);
        const json& triples = field(res, "extract", "triples");
        if (!triples.is_array()) malformed("extract", "'triples' must be an array");
        std::vector<ExtractedTriple> out;
        out.reserve(triples.size());
        for (const auto& t : triples) {
            if (!t.is_object()) malformed("extract", "each triple must be an object");
            auto str = [&](const char* key) {
                auto it = t.find(key);
                return (it != t.end() && it->is_string()) ? it->get<std::string>() : std::string();
            };
            out.push_back({str("subject"), str("subject_type"), str("predicate"), str("object"),
                           str("object_type"), str("source_qa")});
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

class HttpNER final : public NERProvider {
public:
    explicit HttpNER(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<EntityMention> mentions(const std::string& text) override {
        json body{{"task", "ner"}, {"text", text}};
        json res = post_json(cfg_, "ner", body);
        const json& mentions = field(res, "ner", "mentions");
        if (!mentions.is_array()) malformed("ner", "'mentions' must be an array");
        std::vector<EntityMention> out;
        out.reserve(mentions.size());
        for (const auto& m : mentions) {
            if (!m.is_object() || !m.contains("text") || !m["text"].is_string()) {
                malformed("ner", "each mention needs a string 'text'");
            }
            EntityMention mention;
            mention.text = m["text"].get<std::string>();
            if (m.contains("start") && m["start"].is_number_unsigned()) {
                mention.start = m["start"].get<std::size_t>();
            }
            if (m.contains("end") && m["end"].is_number_unsigned()) {
                mention.end = m["end"].get<std::size_t>();
            }
            mention.source = EntityMention::Source::ner_provider;
            out.push_back(std::move(mention));
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

class HttpParaphraser final : public ParaphraseProvider {
public:
    explicit HttpParaphraser(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<std::string> paraphrase(const std::vector<std::string>& texts) override {
        json body{{"task", "paraphrase"}, {"texts", texts}};
        json res = post_json(cfg_, "paraphrase", body);
        const json& out_texts = field(res, "paraphrase", "texts");
        if (!out_texts.is_array() || out_texts.size() != texts.size()) {
            malformed("paraphrase", "'texts' must be an array with one entry per input");
        }
        std::vector<std::string> out;
        out.reserve(out_texts.size());
        for (const auto& t : out_texts) {
            if (!t.is_string()) malformed("paraphrase", "'texts' entries must be strings");
            out.push_back(t.get<std::string>());
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

class HttpReranker final : public RerankProvider {
public:
    explicit HttpReranker(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<double> rerank(const std::string& query,
                               const std::vector<std::string>& candidates) override {
        json body{{"task", "rerank"}, {"query", query}, {"candidates", candidates}};
        json res = post_json(cfg_, "rerank", body);
        const json& scores = field(res, "rerank", "scores");
        if (!scores.is_array() || scores.size() != candidates.size()) {
            malformed("rerank", "'scores' must be an array with one entry per candidate");
        }
        std::vector<double> out;
        out.reserve(scores.size());
        for (const auto& s : scores) {
            if (!s.is_number()) malformed("rerank", "'scores' entries must be numbers");
            out.push_back(s.get<double>());
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

class HttpJudge final : public JudgeProvider {
public:
    explicit HttpJudge(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::string judge(const JudgeRequest& request) override {
        json body{{"task", "judge"}, {"prompt", request.prompt}};
        json res = post_json(cfg_, "judge", body);
        const json& text = field(res, "judge", "text");
        if (!text.is_string()) malformed("judge", "'text' must be a string");
        return text.get<std::string>();
    }

private:
    HttpProviderConfig cfg_;
};

class HttpPerturber final : public PerturbProvider {
public:
    explicit HttpPerturber(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {}
    std::string name() const override { return http_name(cfg_.url); }

    std::vector<std::string> perturb(const std::vector<std::string>& questions) override {
        json body{{"task", "perturb"}, {"questions", questions}};
        json res = post_json(cfg_, "perturb", body);
        const json& out_questions = field(res, "perturb", "questions");
        if (!out_questions.is_array() || out_questions.size() != questions.size()) {
            malformed("perturb", "'questions' must be an array with one entry per input");
        }
        std::vector<std::string> out;
        out.reserve(out_questions.size());
        for (const auto& q : out_questions) {
            if (!q.is_string()) malformed("perturb", "'questions' entries must be strings");
            out.push_back(q.get<std::string>());
        }
        return out;
    }

private:
    HttpProviderConfig cfg_;
};

bool is_http_entry(const std::string& value) {
    return value.rfind("http://", 0) == 0 || value.rfind("https://", 0) == 0;
}

HttpProviderConfig http_config(const PipelineConfig& config, const std::string& url) {
    return HttpProviderConfig{url, config.http.timeout_ms, config.http.retries};
}

}  // namespace

std::unique_ptr<EmbeddingProvider> make_http_embedder(HttpProviderConfig cfg) {
    return std::make_unique<HttpEmbedder>(std::move(cfg));
}

std::unique_ptr<QAGenProvider> make_http_qa_gen(HttpProviderConfig cfg) {
    return std::make_unique<HttpQAGen>(std::move(cfg));
}

std::unique_ptr<ExtractionProvider> make_http_extractor(HttpProviderConfig cfg) {
    return std::make_unique<HttpExtractor>(std::move(cfg));
}

std::unique_ptr<NERProvider> make_http_ner(HttpProviderConfig cfg) {
    return std::make_unique<HttpNER>(std::move(cfg));
}

std::unique_ptr<ParaphraseProvider> make_http_paraphraser(HttpProviderConfig cfg) {
    return std::make_unique<HttpParaphraser>(std::move(cfg));
}

std::unique_ptr<RerankProvider> make_http_reranker(HttpProviderConfig cfg) {
    return std::make_unique<HttpReranker>(std::move(cfg));
}

std::unique_ptr<JudgeProvider> make_http_judge(HttpProviderConfig cfg) {
    return std::make_unique<HttpJudge>(std::move(cfg));
}

std::unique_ptr<PerturbProvider> make_http_perturber(HttpProviderConfig cfg) {
    return std::make_unique<HttpPerturber>(std::move(cfg));
}

Providers make_fallback_providers() {
    Providers p;
    p.embed = std::make_unique<FallbackEmbedder>();
    p.qa_gen = std::make_unique<FallbackQAGen>();
    p.extract = std::make_unique<FallbackExtractor>();
    p.ner = std::make_unique<FallbackNER>();
    p.paraphrase = std::make_unique<FallbackParaphraser>();
    p.rerank = std::make_unique<FallbackReranker>();
    p.judge = std::make_unique<SubstringJudge>();
    p.perturb = std::make_unique<FallbackPerturber>();
    return p;
}

Providers make_providers(const PipelineConfig& config) {
    const auto& e = config.providers;
    for (const auto& [key, value] : std::initializer_list<std::pair<const char*, const std::string*>>{
             {"providers.embed", &e.embed},
             {"providers.qa_gen", &e.qa_gen},
             {"providers.extract", &e.extract},
             {"providers.ner", &e.ner},
             {"providers.paraphrase", &e.paraphrase},
             {"providers.rerank", &e.rerank},
             {"providers.judge", &e.judge},
             {"providers.perturb", &e.perturb},
         }) {
        validate_provider_entry(key, *value);
    }

    Providers p = make_fallback_providers();
    if (is_http_entry(e.embed)) p.embed = make_http_embedder(http_config(config, e.embed));
    if (is_http_entry(e.qa_gen)) p.qa_gen = make_http_qa_gen(http_config(config, e.qa_gen));
    if (is_http_entry(e.extract)) p.extract = make_http_extractor(http_config(config, e.extract));
    if (is_http_entry(e.ner)) p.ner = make_http_ner(http_config(config, e.ner));
    if (is_http_entry(e.paraphrase)) {
        p.paraphrase = make_http_paraphraser(http_config(config, e.paraphrase));
    }
    if (is_http_entry(e.rerank)) p.rerank = make_http_reranker(http_config(config, e.rerank));
    if (is_http_entry(e.judge)) p.judge = make_http_judge(http_config(config, e.judge));
    if (is_http_entry(e.perturb)) p.perturb = make_http_perturber(http_config(config, e.perturb));
    return p;
}

void log_warn(const std::string& message) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::fputs(("[kgqa] warning: " + message + "\n").c_str(), stderr);
}

}  // namespace kgqa
