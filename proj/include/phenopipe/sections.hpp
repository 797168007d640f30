#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phenopipe/note.hpp"

namespace phenopipe {

/// The reserved pseudo-section for text before the first detected heading.
inline constexpr std::int64_t kPreambleSectionId = 0;

struct SectionDictEntry {
    std::int64_t section_concept_id = 0;
    std::string heading; // uppercase, matched verbatim
};

using SectionDict = std::vector<SectionDictEntry>;

/// A detected section. `start` is the heading start offset; `end` is the
/// INCLUSIVE offset of the last character belonging to the section, so for
/// consecutive spans end_i == start_{i+1} - 1 and the final span ends at
/// the last character of the note.
struct SectionSpan {
    std::int64_t note_id = 0;
    std::int64_t section_concept_id = 0;
    std::size_t start = 0;
    std::size_t end = 0;
};

using SectionSpans = std::vector<SectionSpan>;

/// Finds every dictionary heading occurrence in note.text and derives
/// contiguous section boundaries. Overlapping occurrences with different
/// starts resolve leftmost-longest; two dictionary entries matching at the
/// same start offset are a configuration error.
SectionSpans detect_sections(const Note& note, const SectionDict& dict);

/// Id of the unique span containing `offset`. Spans must cover the note.
std::int64_t section_of(std::size_t offset, const SectionSpans& spans);

/// Dictionary file: `section_concept_id<TAB>HEADING` per line, `#` comments.
SectionDict load_section_dict(const std::string& path);
SectionDict parse_section_dict(std::string_view content);

/// CSV `note_id,section_concept_id,start,end` with header.
void write_section_csv(const std::string& path, const SectionSpans& spans);
SectionSpans read_section_csv(const std::string& path);

} // namespace phenopipe
