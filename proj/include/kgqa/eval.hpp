#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgqa/answer.hpp"
#include "kgqa/graph.hpp"
#include "kgqa/qa.hpp"
#include "kgqa/retrieve.hpp"

#include <nlohmann/json_fwd.hpp>

namespace kgqa {

struct Providers;

enum class Verdict { yes, no, unparseable };

std::string_view to_string(Verdict v);

struct JudgeVerdict {
    std::string qa_id;
    Verdict verdict = Verdict::unparseable;
    std::string raw_response;
    std::string judge_name;
};

struct EvalRow {
    std::string qa_id;
    std::string question;
    std::string expected;
    std::string predicted;
    Verdict verdict = Verdict::unparseable;
};

struct EvalReport {
    std::string judge_name;
    std::size_t total_questions = 0;
    std::size_t valid_questions = 0;
    std::size_t invalid_questions = 0;
    std::size_t correct = 0;
    std::size_t incorrect = 0;
    std::size_t unparseable = 0;
    // correct / valid_questions; unset when there are no valid questions.
    std::optional<double> accuracy;
    std::vector<EvalRow> rows;
};

// Drops pairs whose answer, case-folded and trimmed, equals "invalid question".
// Returns the surviving pairs and the number that were excluded.
std::pair<std::vector<QAPair>, std::size_t> filter_valid(const std::vector<QAPair>& pairs);

// Bit-exact instantiation of the versioned judge prompt template.
std::string render_judge_prompt(const std::string& question, const std::string& expected,
                                const std::string& predicted);

// Trimmed, case-insensitive leading token (punctuation ignored): "yes"/"no"
// map to a verdict, anything else is unparseable and is never silently
// counted as a "no".
Verdict parse_verdict(const std::string& raw);

struct EvalConfig {
    RetrievalConfig retrieval;
    SynthesisConfig synthesis;
    // Judge responses keyed by prompt hash are replayed from this JSONL file
    // and appended on miss, making hosted-judge runs reproducible.
    std::optional<std::string> judge_cache_path;
};

// Runs the answer pipeline for every valid question, joins the top candidate
// texts with newlines into the predicted slot, and asks the judge once per
// question. Judge failures mark the question unparseable and the run
// continues.
EvalReport evaluate(const std::vector<QAPair>& dataset, const KnowledgeGraph& graph,
                    Providers& providers, const EvalConfig& config = {});

// Deterministic offline question rewrite. Clause references are preserved
// verbatim; `changed` reports whether any rule fired.
struct PerturbedQuestion {
    std::string text;
    bool changed = false;
};

PerturbedQuestion fallback_perturb(const std::string& question);

struct PerturbationRow {
    std::string qa_id;
    std::string original;
    std::string perturbed;
    bool changed = false;
};

struct PairedEvalReport {
    EvalReport original;
    EvalReport perturbed;
    std::vector<PerturbationRow> perturbations;
};

// Rewrites each question once (provider, or the fallback rules on provider
// failure) and evaluates both forms side by side.
PairedEvalReport perturb_and_reevaluate(const std::vector<QAPair>& dataset,
                                        const KnowledgeGraph& graph, Providers& providers,
                                        const EvalConfig& config = {});

// Text table with one row per question set and the judge's accuracy column.
std::string render_report_text(const EvalReport& report);
std::string render_paired_report_text(const PairedEvalReport& paired);
nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json paired_report_to_json(const PairedEvalReport& paired);

}  // namespace kgqa
