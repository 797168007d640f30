#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phenopipe {

/// One patient record. `text` is the canonical (post-expansion) form that
/// every downstream offset refers to; `original_text` is kept for audit.
struct Note {
    std::int64_t note_id = 0;
    std::string source_id;
    std::string original_text;
    std::string text;

    std::size_t char_count() const { return text.size(); }
};

using Notes = std::vector<Note>;

} // namespace phenopipe
