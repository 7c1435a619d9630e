#include "kgqa/segment.hpp"

#include <regex>

#include "kgqa/errors.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

std::string_view to_string(SegmentCue cue) {
    switch (cue) {
        case SegmentCue::paragraph_break: return "paragraph_break";
        case SegmentCue::bullet: return "bullet";
        case SegmentCue::clause_id: return "clause_id";
        case SegmentCue::length_limit: return "length_limit";
    }
    return "paragraph_break";
}

namespace {

struct Line {
    std::size_t begin = 0;  // first byte
    std::size_t end = 0;    // one past last byte, excluding the newline
    bool blank = true;
};

std::vector<Line> split_lines(std::string_view doc) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    while (pos <= doc.size()) {
        std::size_t nl = doc.find('\n', pos);
        const std::size_t end = (nl == std::string_view::npos) ? doc.size() : nl;
        Line line{pos, end, trim(doc.substr(pos, end - pos)).empty()};
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

bool is_bullet_line(std::string_view content) {
    std::string_view t = content;
    std::size_t i = 0;
    while (i < t.size() && (t[i] == ' ' || t[i] == '\t')) ++i;
    t = t.substr(i);
    if (t.empty()) return false;
    // "- ", "* ", "• " (U+2022 is the three-byte sequence E2 80 A2)
    if ((t[0] == '-' || t[0] == '*') && t.size() > 1 && is_ascii_space(t[1])) return true;
    if (t.size() > 3 && t.substr(0, 3) == "\xE2\x80\xA2" && is_ascii_space(t[3])) return true;
    // "N. " numbering
    std::size_t d = 0;
    while (d < t.size() && t[d] >= '0' && t[d] <= '9') ++d;
    if (d > 0 && d + 1 < t.size() && t[d] == '.' && is_ascii_space(t[d + 1])) return true;
    return false;
}

class ClauseMatcher {
public:
    explicit ClauseMatcher(const std::vector<std::string>& patterns) {
        for (const auto& p : patterns) regexes_.emplace_back(p, std::regex::ECMAScript);
    }

    bool matches(std::string_view content) const {
        std::size_t i = 0;
        while (i < content.size() && (content[i] == ' ' || content[i] == '\t')) ++i;
        const std::string head(content.substr(i));
        for (const auto& re : regexes_) {
            if (std::regex_search(head.begin(), head.end(), re,
                                  std::regex_constants::match_continuous))
                return true;
        }
        return false;
    }

private:
    std::vector<std::regex> regexes_;
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    SegmentCue cue = SegmentCue::paragraph_break;
};

// Shrink a span to its non-whitespace extent; returns false if nothing is left.
bool tighten(std::string_view doc, Span& s) {
    while (s.begin < s.end && is_ascii_space(doc[s.begin])) ++s.begin;
    while (s.end > s.begin && is_ascii_space(doc[s.end - 1])) --s.end;
    return s.begin < s.end;
}

// Split point for an oversized span: the nearest sentence end at or below
// max_chars, then the last whitespace below it, then a hard cut.
std::size_t split_point(std::string_view piece, std::size_t max_chars) {
    const auto sentences = sentence_spans(piece);
    std::size_t best = 0;
    for (const auto& [b, e] : sentences) {
        if (e <= max_chars && e > best) best = e;
    }
    if (best > 0 && best < piece.size()) return best;
    for (std::size_t i = max_chars; i > 0; --i) {
        if (is_ascii_space(piece[i - 1])) return i - 1;
    }
    return max_chars;
}

}  // namespace

std::vector<Chunk> segment(std::string_view document, const SegmentationPolicy& policy) {
    if (policy.max_chars == 0) throw ValidationError("max_chars must be positive");
    if (policy.min_chars >= policy.max_chars)
        throw ValidationError("min_chars must be smaller than max_chars");
    if (trim(document).empty()) throw ValidationError("document contains no text");

    const ClauseMatcher clause(policy.clause_patterns);
    const auto lines = split_lines(document);

    // group lines into raw segments
    std::vector<Span> spans;
    bool after_gap = true;
    for (const auto& line : lines) {
        if (line.blank) {
            after_gap = true;
            continue;
        }
        const std::string_view content = document.substr(line.begin, line.end - line.begin);
        SegmentCue cue;
        bool starts_new = false;
        if (clause.matches(content)) {
            cue = SegmentCue::clause_id;
            starts_new = true;
        } else if (is_bullet_line(content)) {
            cue = SegmentCue::bullet;
            starts_new = true;
        } else if (after_gap || spans.empty()) {
            cue = SegmentCue::paragraph_break;
            starts_new = true;
        } else {
            cue = SegmentCue::paragraph_break;  // unused
        }
        after_gap = false;

        if (starts_new) {
            spans.push_back(Span{line.begin, line.end, cue});
        } else {
            spans.back().end = line.end;
        }
    }

    for (auto& s : spans) tighten(document, s);

    // merge undersized fragments into the previous chunk
    std::vector<Span> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && s.end - s.begin < policy.min_chars) {
            merged.back().end = s.end;
        } else {
            merged.push_back(s);
        }
    }

    // forced splits for oversized spans
    std::vector<Span> sized;
    for (auto span : merged) {
        SegmentCue cue = span.cue;
        while (span.end - span.begin > policy.max_chars) {
            const std::string_view piece =
                document.substr(span.begin, span.end - span.begin);
            const std::size_t cut = split_point(piece, policy.max_chars);
            Span head{span.begin, span.begin + cut, cue};
            if (tighten(document, head)) sized.push_back(head);
            span.begin += cut;
            span.cue = SegmentCue::length_limit;
            cue = SegmentCue::length_limit;
            if (!tighten(document, span)) break;
        }
        if (span.begin < span.end) sized.push_back(span);
    }

    std::vector<Chunk> chunks;
    chunks.reserve(sized.size());
    for (std::size_t i = 0; i < sized.size(); ++i) {
        const auto& s = sized[i];
        Chunk c;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "c%04zu", i + 1);
        c.chunk_id = buf;
        c.text = std::string(document.substr(s.begin, s.end - s.begin));
        c.start_offset = s.begin;
        c.end_offset = s.end;
        c.cue = s.cue;
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace kgqa
