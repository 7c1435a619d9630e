#include "kgqa/eval.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"
#include "kgqa/judge_prompt.hpp"
#include "kgqa/providers.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kInvalidAnswerMarker = "invalid question";

void replace_slot(std::string& text, std::string_view slot, const std::string& value) {
    auto pos = text.find(slot);
    if (pos == std::string::npos) {
        throw ValidationError("judge prompt template is missing slot '" + std::string(slot) + "'");
    }
    text.replace(pos, slot.size(), value);
}

std::string cache_key(const std::string& judge_name, const std::string& prompt) {
    return to_hex16(fnv1a64(judge_name + '\x1f' + prompt));
}

class JudgeCache {
public:
    explicit JudgeCache(std::optional<std::string> path) : path_(std::move(path)) {
        if (!path_) return;
        std::ifstream in(*path_);
        if (!in) return;  // absent file: cold cache
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            json entry = json::parse(line, nullptr, false);
            if (entry.is_discarded() || !entry.is_object() || !entry.contains("key") ||
                !entry.contains("response") || !entry["key"].is_string() ||
                !entry["response"].is_string()) {
                throw ParseError("judge cache entry must be {\"key\",\"prompt_version\",\"response\"}",
                                 line_no);
            }
            entries_[entry["key"].get<std::string>()] = entry["response"].get<std::string>();
        }
    }

    const std::string* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    void put(const std::string& key, const std::string& response) {
        entries_[key] = response;
        if (!path_) return;
        std::ofstream out(*path_, std::ios::app);
        if (!out) {
            if (!warned_) {
                log_warn("judge cache not writable: " + *path_);
                warned_ = true;
            }
            return;
        }
        ordered_json entry{{"key", key},
                           {"prompt_version", std::string(kJudgePromptVersion)},
                           {"response", response}};
        out << entry.dump() << '\n';
    }

private:
    std::optional<std::string> path_;
    std::unordered_map<std::string, std::string> entries_;
    bool warned_ = false;
};

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::unparseable: return "unparseable";
    }
    return "unknown";
}

std::pair<std::vector<QAPair>, std::size_t> filter_valid(const std::vector<QAPair>& pairs) {
    std::vector<QAPair> valid;
    valid.reserve(pairs.size());
    std::size_t excluded = 0;
    for (const auto& pair : pairs) {
        if (casefold(trim(pair.answer)) == kInvalidAnswerMarker) {
            ++excluded;
        } else {
            valid.push_back(pair);
        }
    }
    return {std::move(valid), excluded};
}

std::string render_judge_prompt(const std::string& question, const std::string& expected,
                                const std::string& predicted) {
    std::string prompt(kJudgePromptTemplate);
    replace_slot(prompt, "{question}", question);
    replace_slot(prompt, "{expected}", expected);
    replace_slot(prompt, "{predicted}", predicted);
    return prompt;
}

Verdict parse_verdict(const std::string& raw) {
    std::size_t i = 0;
    while (i < raw.size() && !std::isalpha(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t begin = i;
    while (i < raw.size() && std::isalpha(static_cast<unsigned char>(raw[i]))) ++i;
    std::string token = casefold(std::string_view(raw).substr(begin, i - begin));
    if (token == "yes") return Verdict::yes;
    if (token == "no") return Verdict::no;
    return Verdict::unparseable;
}

EvalReport evaluate(const std::vector<QAPair>& dataset, const KnowledgeGraph& graph,
                    Providers& providers, const EvalConfig& config) {
    EvalReport report;
    report.judge_name = providers.judge->name();
    report.total_questions = dataset.size();

    auto [valid, excluded] = filter_valid(dataset);
    report.valid_questions = valid.size();
    report.invalid_questions = excluded;

    JudgeCache cache(config.judge_cache_path);

    report.rows.reserve(valid.size());
    for (const auto& pair : valid) {
        auto candidates =
            answer(graph, pair.question, providers, config.retrieval, config.synthesis);
        std::string predicted;
        for (const auto& candidate : candidates) {
            if (!predicted.empty()) predicted += '\n';
            predicted += candidate.text;
        }

        const std::string prompt = render_judge_prompt(pair.question, pair.answer, predicted);
        const std::string key = cache_key(report.judge_name, prompt);

        Verdict verdict = Verdict::unparseable;
        if (const std::string* cached = cache.find(key)) {
            verdict = parse_verdict(*cached);
        } else {
            try {
                std::string raw =
                    providers.judge->judge({prompt, pair.question, pair.answer, predicted});
                cache.put(key, raw);
                verdict = parse_verdict(raw);
            } catch (const Error& e) {
                log_warn("judge failed for '" + pair.qa_id + "': " + e.what());
            }
        }

        switch (verdict) {
            case Verdict::yes: ++report.correct; break;
            case Verdict::no: ++report.incorrect; break;
            case Verdict::unparseable: ++report.unparseable; break;
        }
        report.rows.push_back({pair.qa_id, pair.question, pair.answer, predicted, verdict});
    }

    if (report.valid_questions > 0) {
        report.accuracy = static_cast<double>(report.correct) /
                          static_cast<double>(report.valid_questions);
    }
    return report;
}

PerturbedQuestion fallback_perturb(const std::string& question) {
    std::string text = question;
    bool changed = false;

    {
        const std::string opener = "which of the following is not ";
        std::string folded = casefold(text);
        auto pos = folded.find(opener);
        if (pos != std::string::npos) {
            std::string replacement = "which is not ";
            if (is_ascii_upper(text[pos])) replacement[0] = 'W';
            text = text.substr(0, pos) + replacement + text.substr(pos + opener.size());
            changed = true;
        }
    }

    static const std::vector<std::pair<std::string_view, std::string_view>> kSynonyms = {
        {"under", "according to"},
        {"risks", "responsibilities"},
        {"risk", "responsibility"},
        {"document", "text"},
        {"states", "says"},
        {"state", "say"},
        {"must", "shall"},
        {"may", "can"},
        {"responsible", "accountable"},
        {"obligations", "duties"},
        {"obligation", "duty"},
    };

    auto clauses = clause_spans(text);
    auto inside_clause = [&](std::size_t begin, std::size_t end) {
        for (auto [cb, ce] : clauses) {
            if (begin < ce && cb < end) return true;
        }
        return false;
    };

    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
            out += text[i++];
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view word(text.data() + begin, i - begin);
        std::string folded = casefold(word);

        std::string_view replacement;
        if (!inside_clause(begin, i)) {
            for (const auto& [from, to] : kSynonyms) {
                if (folded == from) {
                    replacement = to;
                    break;
                }
            }
        }
        if (replacement.empty()) {
            out.append(word);
        } else {
            std::string r(replacement);
            if (is_ascii_upper(word.front())) r[0] = static_cast<char>(std::toupper(r[0]));
            out += r;
            changed = true;
        }
    }

    return {std::move(out), changed};
}

PairedEvalReport perturb_and_reevaluate(const std::vector<QAPair>& dataset,
                                        const KnowledgeGraph& graph, Providers& providers,
                                        const EvalConfig& config) {
    std::vector<std::string> questions;
    questions.reserve(dataset.size());
    for (const auto& pair : dataset) questions.push_back(pair.question);

    std::vector<std::string> rewritten;
    try {
        rewritten = providers.perturb->perturb(questions);
        if (rewritten.size() != questions.size()) {
            throw ProviderError("perturb", "expected one question per input, got " +
                                               std::to_string(rewritten.size()));
        }
    } catch (const Error& e) {
        log_warn(std::string("perturb provider failed, using fallback rewrite: ") + e.what());
        rewritten.clear();
        rewritten.reserve(questions.size());
        for (const auto& q : questions) rewritten.push_back(fallback_perturb(q).text);
    }

    PairedEvalReport paired;
    std::vector<QAPair> perturbed_dataset = dataset;
    paired.perturbations.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        perturbed_dataset[i].question = rewritten[i];
        paired.perturbations.push_back(
            {dataset[i].qa_id, dataset[i].question, rewritten[i], rewritten[i] != dataset[i].question});
    }

    paired.original = evaluate(dataset, graph, providers, config);
    paired.perturbed = evaluate(perturbed_dataset, graph, providers, config);
    return paired;
}

namespace {

std::string accuracy_text(const EvalReport& report) {
    if (!report.accuracy) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *report.accuracy);
    return buf;
}

void append_report_row(std::ostringstream& out, std::string_view label, const EvalReport& r) {
    out << label;
    for (std::size_t pad = label.size(); pad < 11; ++pad) out << ' ';
    char line[160];
    std::snprintf(line, sizeof(line), "%7zu %7zu %9zu %9zu %11zu %13zu %10s",
                  r.total_questions, r.valid_questions, r.invalid_questions, r.correct,
                  r.incorrect, r.unparseable, accuracy_text(r).c_str());
    out << line << '\n';
}

}  // namespace

std::string render_report_text(const EvalReport& report) {
    std::ostringstream out;
    out << "judge: " << report.judge_name << '\n';
    out << "questions: " << report.total_questions << " total, " << report.valid_questions
        << " valid, " << report.invalid_questions << " invalid\n";
    out << "verdicts: " << report.correct << " correct, " << report.incorrect << " incorrect, "
        << report.unparseable << " unparseable\n";
    out << "accuracy: " << accuracy_text(report) << " (correct / valid)\n";
    return out.str();
}

std::string render_paired_report_text(const PairedEvalReport& paired) {
    std::ostringstream out;
    out << "judge: " << paired.original.judge_name << '\n';
    out << "set          total   valid   invalid   correct   incorrect   unparseable   accuracy\n";
    append_report_row(out, "original", paired.original);
    append_report_row(out, "perturbed", paired.perturbed);

    std::size_t changed = 0;
    for (const auto& row : paired.perturbations) {
        if (row.changed) ++changed;
    }
    out << "perturbations: " << changed << " of " << paired.perturbations.size()
        << " questions changed\n";
    if (paired.original.accuracy && paired.perturbed.accuracy) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "accuracy delta: %+.4f\n",
                      *paired.perturbed.accuracy - *paired.original.accuracy);
        out << buf;
    }
    return out.str();
}

nlohmann::json report_to_json(const EvalReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"qa_id", row.qa_id},
                        {"question", row.question},
                        {"expected", row.expected},
                        {"predicted", row.predicted},
                        {"verdict", std::string(to_string(row.verdict))}});
    }
    ordered_json out{{"judge", report.judge_name},
                     {"total_questions", report.total_questions},
                     {"valid_questions", report.valid_questions},
                     {"invalid_questions", report.invalid_questions},
                     {"correct", report.correct},
                     {"incorrect", report.incorrect},
                     {"unparseable", report.unparseable},
                     {"accuracy", report.accuracy ? json(*report.accuracy) : json(nullptr)},
                     {"rows", std::move(rows)}};
    return out;
}

nlohmann::json paired_report_to_json(const PairedEvalReport& paired) {
    ordered_json perturbations = ordered_json::array();
    for (const auto& row : paired.perturbations) {
        perturbations.push_back({{"qa_id", row.qa_id},
                                 {"original", row.original},
                                 {"perturbed", row.perturbed},
                                 {"changed", row.changed}});
    }
    return ordered_json{{"original", report_to_json(paired.original)},
                        {"perturbed", report_to_json(paired.perturbed)},
                        {"perturbations", std::move(perturbations)}};
}

}  // namespace kgqa
