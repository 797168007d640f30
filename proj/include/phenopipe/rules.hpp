#pragma once

#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "phenopipe/labels.hpp"
#include "phenopipe/note.hpp"
#include "phenopipe/text.hpp"

namespace phenopipe {

enum class MatchCategory : int { Questionable = 0, Absent = 1, Present = 2 };

std::string_view to_string(MatchCategory category);
MatchCategory category_from_string(std::string_view s);

/// Compiled regexes for one disease: alias patterns plus the sentence-level
/// uncertainty and negation contexts. Patterns are case-insensitive.
struct DiseaseRuleSet {
    std::string disease;
    std::vector<std::string> alias_texts;
    std::vector<std::regex> alias_patterns;
    std::vector<std::string> questionable_texts;
    std::vector<std::regex> questionable_context;
    std::vector<std::string> absent_texts;
    std::vector<std::regex> absent_context;
};

using DiseaseRuleSets = std::vector<DiseaseRuleSet>;

/// One cascade match. All spans refer to the ORIGINAL canonical text; the
/// recorded strings are exact slices of it, which is what the
/// length-preserving blanking guarantees.
struct RegexMatchRecord {
    std::int64_t note_id = 0;
    std::string disease;
    MatchCategory category = MatchCategory::Present;
    std::string dis_alias;
    Span dis_pos;
    // sentence context, Questionable/Absent only
    std::optional<std::string> sentence;
    std::optional<Span> sen_pos;
};

using RegexMatchRecords = std::vector<RegexMatchRecord>;

struct RuleLabel {
    std::int64_t note_id = 0;
    std::string disease;
    Label label = Label::Unmentioned;
};

using RuleLabels = std::vector<RuleLabel>;

/// Replaces [start, end) with spaces. Output length always equals input
/// length, so offsets recorded later remain valid in the original text.
std::string blank_span(const std::string& text, Span span);

/// Three-pass Questionable -> Absent -> Present cascade over one note for
/// one disease, blanking consumed alias spans between passes. The document
/// label is the highest-precedence category matched (Q > A > P), else
/// Unmentioned.
struct CascadeResult {
    RegexMatchRecords records;
    RuleLabel label;
};

CascadeResult cascade_match(const Note& note, const DiseaseRuleSet& rules);

/// cascade_match per (note, disease); exactly one label per pair.
RuleLabels rule_labels_all(const Notes& notes, const DiseaseRuleSets& rulesets);

/// Rule file DSL: `disease: NAME`, then `alias:`, `questionable:`,
/// `absent:` lines, each holding one regex; `#` comments.
DiseaseRuleSet parse_rule_file(std::string_view content, const std::string& origin = "");
DiseaseRuleSet load_rule_file(const std::string& path);

/// Loads every `*.rules` file in a directory, sorted by filename.
DiseaseRuleSets load_rules_dir(const std::string& dir);

/// CSV `note_id,disease,category,dis_alias,dis_start,dis_end,sentence,sen_start,sen_end`
/// (sentence fields empty for Present).
void write_match_csv(const std::string& path, const RegexMatchRecords& records);
RegexMatchRecords read_match_csv(const std::string& path);

void write_rule_label_csv(const std::string& path, const RuleLabels& labels);
RuleLabels read_rule_label_csv(const std::string& path);

} // namespace phenopipe
