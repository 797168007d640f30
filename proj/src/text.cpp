#include "phenopipe/text.hpp"

#include <algorithm>
#include <cctype>

namespace phenopipe {

bool is_sentence_terminator(char c) {
    return c == '.' || c == '!' || c == '?' || c == ';' || c == '\n';
}

namespace {

bool is_terminator(char c) { return is_sentence_terminator(c); }

} // namespace

std::vector<Span> sentence_spans(std::string_view text) {
    std::vector<Span> spans;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (is_terminator(text[i])) {
            if (i > begin) spans.push_back({begin, i});
            begin = i + 1;
        }
    }
    if (text.size() > begin) spans.push_back({begin, text.size()});
    return spans;
}

Span sentence_at(std::string_view text, std::size_t offset) {
    if (offset >= text.size()) return {offset, offset};
    if (is_terminator(text[offset])) return {offset, offset};
    std::size_t start = offset;
    while (start > 0 && !is_terminator(text[start - 1])) --start;
    std::size_t end = offset;
    while (end < text.size() && !is_terminator(text[end])) ++end;
    return {start, end};
}

bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len;
        if (c < 0x80) { i += 1; continue; }
        else if ((c & 0xe0) == 0xc0) { len = 2; if (c < 0xc2) return false; }
        else if ((c & 0xf0) == 0xe0) { len = 3; }
        else if ((c & 0xf8) == 0xf0) { len = 4; if (c > 0xf4) return false; }
        else return false;
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xc0) != 0x80) return false;
        }
        // reject surrogate range and overlong 3/4-byte forms
        const unsigned char c1 = static_cast<unsigned char>(text[i + 1]);
        if (len == 3 && c == 0xe0 && c1 < 0xa0) return false;
        if (len == 3 && c == 0xed && c1 > 0x9f) return false;
        if (len == 4 && c == 0xf0 && c1 < 0x90) return false;
        if (len == 4 && c == 0xf4 && c1 > 0x8f) return false;
        i += len;
    }
    return true;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    return out;
}

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

bool on_token_boundaries(std::string_view text, std::size_t start, std::size_t end) {
    if (start >= end || end > text.size()) return false;
    if (is_word_char(text[start]) && start > 0 && is_word_char(text[start - 1])) return false;
    if (is_word_char(text[end - 1]) && end < text.size() && is_word_char(text[end])) return false;
    return true;
}

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace phenopipe
