#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace phenopipe {

/// Half-open [start, end) character span. All offsets in this codebase are
/// byte offsets into UTF-8 canonical note text.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }
    bool contains(std::size_t offset) const { return offset >= start && offset < end; }
    bool operator==(const Span&) const = default;
};

/// Sentence boundaries: maximal spans split on '.', '!', '?', ';' or
/// newline, with the terminator excluded from the span.
std::vector<Span> sentence_spans(std::string_view text);

bool is_sentence_terminator(char c);

/// Span of the sentence containing `offset`, or the empty span at `offset`
/// when the offset sits on a terminator character.
Span sentence_at(std::string_view text, std::size_t offset);

bool is_valid_utf8(std::string_view text);

/// ASCII-only lowercasing; multibyte sequences pass through untouched.
std::string to_lower(std::string_view text);

bool is_word_char(unsigned char c);

/// True when [start, end) begins and ends on token boundaries, i.e. the
/// match is not glued to adjacent alphanumeric characters.
bool on_token_boundaries(std::string_view text, std::size_t start, std::size_t end);

bool is_blank(std::string_view text);

} // namespace phenopipe
