#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kgqa/config.hpp"
#include "kgqa/extract.hpp"
#include "kgqa/graph.hpp"
#include "kgqa/qa.hpp"
#include "kgqa/retrieve.hpp"
#include "kgqa/segment.hpp"

namespace kgqa {

// Every hosted model behind this pipeline sits behind one of these interfaces,
// and each has a deterministic offline fallback so the whole system runs with
// no network at all. HTTP providers share a single wire shape: POST a JSON
// body {"task": "<step>", ...} and read a JSON response (see README).

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string name() const = 0;
    virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
};

class QAGenProvider {
public:
    virtual ~QAGenProvider() = default;
    virtual std::string name() const = 0;
    // qa_id and source_chunk are assigned by the caller.
    virtual std::vector<QAPair> generate(const Chunk& chunk) = 0;
};

class ExtractionProvider {
public:
    virtual ~ExtractionProvider() = default;
    virtual std::string name() const = 0;
    virtual std::vector<ExtractedTriple> extract(const ExtractionBatch& batch) = 0;
};

class NERProvider {
public:
    virtual ~NERProvider() = default;
    virtual std::string name() const = 0;
    virtual std::vector<EntityMention> mentions(const std::string& text) = 0;
};

class ParaphraseProvider {
public:
    virtual ~ParaphraseProvider() = default;
    virtual std::string name() const = 0;
    // Must return one text per input; an empty output text means "failed,
    // keep the raw statement".
    virtual std::vector<std::string> paraphrase(const std::vector<std::string>& texts) = 0;
};

class RerankProvider {
public:
    virtual ~RerankProvider() = default;
    virtual std::string name() const = 0;
    virtual std::vector<double> rerank(const std::string& query,
                                       const std::vector<std::string>& candidates) = 0;
};

struct JudgeRequest {
    std::string prompt;  // the rendered judge prompt; the only field sent on the wire
    std::string question;
    std::string expected;
    std::string predicted;
};

class JudgeProvider {
public:
    virtual ~JudgeProvider() = default;
    virtual std::string name() const = 0;
    virtual std::string judge(const JudgeRequest& request) = 0;
};

class PerturbProvider {
public:
    virtual ~PerturbProvider() = default;
    virtual std::string name() const = 0;
    virtual std::vector<std::string> perturb(const std::vector<std::string>& questions) = 0;
};

// ---------------------------------------------------------------------------
// deterministic offline fallbacks

// Feature-hashes character 3-grams of the case-folded text into a fixed
// 256-dim vector, L2-normalized. Identical strings always embed identically
// and near-identical strings land on mostly shared buckets.
class FallbackEmbedder final : public EmbeddingProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
    static Embedding embed_one(const std::string& text);
};

// One cloze-style pair per declarative sentence: the sentence becomes the
// answer and the question asks about its first entity-ish span.
class FallbackQAGen final : public QAGenProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<QAPair> generate(const Chunk& chunk) override;
};

// Pattern rules over each QA pair: copular sentences, possessives, clause
// mentions, and numbers with units. See extract_pair_fallback for the rules.
class FallbackExtractor final : public ExtractionProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<ExtractedTriple> extract(const ExtractionBatch& batch) override;
};

std::vector<ExtractedTriple> extract_pair_fallback(const QAPair& pair);

class FallbackNER final : public NERProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<EntityMention> mentions(const std::string& text) override;
};

// Identity transform: the raw statements are the floor answer quality.
class FallbackParaphraser final : public ParaphraseProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<std::string> paraphrase(const std::vector<std::string>& texts) override;
};

// Scores candidates by cosine similarity of fallback embeddings.
class FallbackReranker final : public RerankProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<double> rerank(const std::string& query,
                               const std::vector<std::string>& candidates) override;
};

// Stub judge: "Yes" iff the expected answer (normalized) is a substring of
// the predicted answer. Used for offline evaluation runs.
class SubstringJudge final : public JudgeProvider {
public:
    std::string name() const override { return "fallback-substring"; }
    std::string judge(const JudgeRequest& request) override;
};

class FallbackPerturber final : public PerturbProvider {
public:
    std::string name() const override { return "fallback"; }
    std::vector<std::string> perturb(const std::vector<std::string>& questions) override;
};

// ---------------------------------------------------------------------------

// The full provider bundle the pipeline runs against.
struct Providers {
    std::unique_ptr<EmbeddingProvider> embed;
    std::unique_ptr<QAGenProvider> qa_gen;
    std::unique_ptr<ExtractionProvider> extract;
    std::unique_ptr<NERProvider> ner;
    std::unique_ptr<ParaphraseProvider> paraphrase;
    std::unique_ptr<RerankProvider> rerank;
    std::unique_ptr<JudgeProvider> judge;
    std::unique_ptr<PerturbProvider> perturb;
};

// Builds the bundle from config entries: "fallback" selects the offline
// implementation, an http(s) URL selects the wire client.
Providers make_providers(const PipelineConfig& config);

// All-fallback bundle, the offline default.
Providers make_fallback_providers();

struct HttpProviderConfig {
    std::string url;
    std::size_t timeout_ms = 30000;
    std::size_t retries = 2;
};

std::unique_ptr<EmbeddingProvider> make_http_embedder(HttpProviderConfig cfg);
std::unique_ptr<QAGenProvider> make_http_qa_gen(HttpProviderConfig cfg);
std::unique_ptr<ExtractionProvider> make_http_extractor(HttpProviderConfig cfg);
std::unique_ptr<NERProvider> make_http_ner(HttpProviderConfig cfg);
std::unique_ptr<ParaphraseProvider> make_http_paraphraser(HttpProviderConfig cfg);
std::unique_ptr<RerankProvider> make_http_reranker(HttpProviderConfig cfg);
std::unique_ptr<JudgeProvider> make_http_judge(HttpProviderConfig cfg);
std::unique_ptr<PerturbProvider> make_http_perturber(HttpProviderConfig cfg);

// Small stderr logger for degraded-path notices.
void log_warn(const std::string& message);

}  // namespace kgqa
