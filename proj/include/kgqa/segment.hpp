#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kgqa {

// What opened a chunk: a paragraph break (including document start), a bullet
// marker, a clause identifier, or a forced split of an oversized segment.
enum class SegmentCue { paragraph_break, bullet, clause_id, length_limit };

std::string_view to_string(SegmentCue cue);

struct Chunk {
    std::string chunk_id;
    std::string text;
    std::size_t start_offset = 0;  // byte offsets into the source document
    std::size_t end_offset = 0;
    SegmentCue cue = SegmentCue::paragraph_break;
};

struct SegmentationPolicy {
    std::size_t max_chars = 1200;
    // Segments shorter than this merge into the previous chunk.
    std::size_t min_chars = 80;
    // Regexes (anchored at line start after leading blanks) that open a new
    // clause chunk. Defaults recognize "Clause <number>" and dotted headings
    // like "3.1 Risk allocation".
    std::vector<std::string> clause_patterns = {
        R"(Clause\s+\d+(\.\d+)*\b)",
        R"(\d+\.\d+(\.\d+)*(\s+|$))",
    };
};

// Rule-based segmentation. Deterministic: the same text and policy always
// produce the same chunk list. Boundaries occur only at paragraph breaks,
// bullet markers, clause identifiers, or forced sentence-end splits; chunk
// spans are non-overlapping and together cover every non-whitespace byte of
// the document. Throws ValidationError on whitespace-only input.
std::vector<Chunk> segment(std::string_view document, const SegmentationPolicy& policy = {});

}  // namespace kgqa
