#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "phenopipe/note.hpp"

namespace phenopipe {

inline constexpr std::string_view kDefaultSentinel = "[record_end]";

struct RawCorpus {
    std::string path;
    std::string text;
};

RawCorpus load_corpus(const std::string& path);

/// One abbreviation-expansion rule applied to raw record text.
struct AbbreviationRule {
    std::string rule_id;
    std::string pattern_text;
    std::regex pattern;
    std::string replacement;
};

/// Splits a master corpus on `sentinel` into notes, in document order.
/// Blank segments are skipped; trailing text after the last sentinel forms
/// a final note when non-blank. note_id runs 1..N over the kept segments.
/// The returned notes carry original text only; call deabbreviate_notes to
/// fill in the canonical text.
Notes split_master(const RawCorpus& corpus, std::string_view sentinel = kDefaultSentinel);

/// Applies the rules in list order, each replacing every non-overlapping
/// match left to right.
std::string deabbreviate(const std::string& text, const std::vector<AbbreviationRule>& rules);

void deabbreviate_notes(Notes& notes, const std::vector<AbbreviationRule>& rules);

/// Rule file format: `pattern<TAB>replacement`, one per line, `#` comments.
std::vector<AbbreviationRule> load_abbreviation_rules(const std::string& path);
std::vector<AbbreviationRule> parse_abbreviation_rules(std::string_view content);

/// Well-formed single-element XML document with the note id as an
/// attribute and the canonical text as escaped element content.
std::string export_record_xml(const Note& note);

} // namespace phenopipe
