#include "kgqa/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace kgqa {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

static bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string casefold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return out;
}

std::string collapse_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : std::string(trim(s))) {
        if (is_ascii_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        unsigned char u = static_cast<unsigned char>(c);
        out.push_back((u >= 'A' && u <= 'Z') ? static_cast<char>(u - 'A' + 'a') : c);
    }
    return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;

    std::vector<std::size_t> prev(m + 1);
    std::vector<std::size_t> cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;

    for (std::size_t i = 0; i < n; ++i) {
        cur[0] = i + 1;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t subst = prev[j] + (a[i] == b[j] ? 0 : 1);
            cur[j + 1] = std::min({cur[j] + 1, prev[j + 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::string predicate_to_words(std::string_view predicate) {
    std::string out;
    out.reserve(predicate.size());
    for (char c : predicate) {
        if (c == '_') {
            out.push_back(' ');
        } else {
            unsigned char u = static_cast<unsigned char>(c);
            out.push_back((u >= 'A' && u <= 'Z') ? static_cast<char>(u - 'A' + 'a') : c);
        }
    }
    return out;
}

std::string to_upper_snake(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_sep = false;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        const bool alnum = std::isalnum(u) != 0;
        if (!alnum) {
            pending_sep = true;
            continue;
        }
        if (pending_sep && !out.empty()) out.push_back('_');
        pending_sep = false;
        out.push_back((u >= 'a' && u <= 'z') ? static_cast<char>(u - 'a' + 'A') : c);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t start = 0;
    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (c == '.' && i > 0 && i + 1 < n && is_ascii_digit(text[i - 1]) && is_ascii_digit(text[i + 1]))
            continue;
        // absorb trailing punctuation run
        std::size_t j = i;
        while (j + 1 < n && (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?')) ++j;
        if (j + 1 < n && !is_ascii_space(text[j + 1])) {
            i = j;
            continue;
        }
        spans.emplace_back(start, j + 1);
        i = j;
        start = j + 1;
        while (start < n && is_ascii_space(text[start])) ++start;
        i = start > 0 ? start - 1 : 0;
    }
    if (start < n) {
        std::string_view rest = trim(text.substr(start));
        if (!rest.empty()) spans.emplace_back(start, n);
    }
    // shrink spans to their non-whitespace extent
    for (auto& [b, e] : spans) {
        while (b < e && is_ascii_space(text[b])) ++b;
        while (e > b && is_ascii_space(text[e - 1])) --e;
    }
    return spans;
}

bool is_mention_stopword(std::string_view word) {
    static const std::unordered_set<std::string> kStop = {
        "the", "a",     "an",    "and",  "or",    "but",   "which", "what",  "who",
        "whom", "whose", "where", "when", "why",   "how",   "is",    "are",   "was",
        "were", "be",    "been",  "do",   "does",  "did",   "can",   "could", "will",
        "would", "shall", "should", "may", "might", "must",  "not",   "no",    "under",
        "over", "in",    "on",    "at",   "of",    "to",    "for",   "from",  "by",
        "with", "about", "according", "as", "if",  "this",  "that",  "these", "those",
        "it",   "its",   "there", "here",
    };
    return kStop.count(casefold(word)) > 0;
}

std::vector<std::pair<std::size_t, std::size_t>> clause_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        // match "Clause" at a word boundary
        if ((i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]))) &&
            text.substr(i).substr(0, 6) == "Clause") {
            std::size_t j = i + 6;
            std::size_t ws = j;
            while (ws < n && (text[ws] == ' ' || text[ws] == '\t')) ++ws;
            if (ws > j && ws < n && is_ascii_digit(text[ws])) {
                std::size_t k = ws;
                while (k < n && is_ascii_digit(text[k])) ++k;
                while (k + 1 < n && text[k] == '.' && is_ascii_digit(text[k + 1])) {
                    ++k;
                    while (k < n && is_ascii_digit(text[k])) ++k;
                }
                out.emplace_back(i, k);
                i = k;
                continue;
            }
        }
        ++i;
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace kgqa
