#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kgqa {

// ASCII-oriented string helpers. Inputs are treated as UTF-8 byte strings;
// case folding and word classification only touch the ASCII range.

std::string_view trim(std::string_view s);
std::string casefold(std::string_view s);

// Case-fold, trim, and collapse internal whitespace runs to single spaces.
// This is the normal form used for node identity and fuzzy comparison.
std::string collapse_ws(std::string_view s);

bool is_ascii_upper(char c);
bool is_ascii_space(char c);

// Exact Levenshtein distance: insert / delete / substitute, unit costs.
std::size_t levenshtein(std::string_view a, std::string_view b);

// "BEARS_RISK" -> "bears risk"
std::string predicate_to_words(std::string_view predicate);

// "bears risk" -> "BEARS_RISK". Runs of non-alphanumerics become single
// underscores; leading/trailing underscores are stripped.
std::string to_upper_snake(std::string_view s);

// Sentence spans (byte offsets, end exclusive). A sentence ends after a run
// of '.', '!' or '?' followed by whitespace or end of text; a '.' between two
// digits never terminates a sentence (keeps "3.1" intact).
std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view text);

// Words that never start an entity mention (question openers, articles,
// auxiliaries, common prepositions).
bool is_mention_stopword(std::string_view word);

// All "Clause <number>" spans in text, e.g. "Clause 3.1" (byte offsets).
std::vector<std::pair<std::size_t, std::size_t>> clause_spans(std::string_view text);

std::uint64_t fnv1a64(std::string_view s);
std::string to_hex16(std::uint64_t v);

}  // namespace kgqa
