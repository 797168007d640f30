#include "phenopipe/rules.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"

namespace phenopipe {

std::string_view to_string(MatchCategory category) {
    switch (category) {
    case MatchCategory::Questionable: return "Questionable";
    case MatchCategory::Absent: return "Absent";
    case MatchCategory::Present: return "Present";
    }
    return "?";
}

MatchCategory category_from_string(std::string_view s) {
    if (s == "Questionable") return MatchCategory::Questionable;
    if (s == "Absent") return MatchCategory::Absent;
    if (s == "Present") return MatchCategory::Present;
    throw Error("unknown match category: " + std::string(s));
}

std::string blank_span(const std::string& text, Span span) {
    if (span.start > span.end || span.end > text.size()) {
        throw SpanOutOfRange("blank_span: span [" + std::to_string(span.start) + ", " +
                             std::to_string(span.end) + ") on text of length " +
                             std::to_string(text.size()));
    }
    std::string out = text;
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(span.start),
              out.begin() + static_cast<std::ptrdiff_t>(span.end), ' ');
    return out;
}

namespace {

struct AliasHit {
    Span span;
    std::size_t pattern_index;
};

/// All alias matches inside [region.start, region.end) of `text`, resolved
/// leftmost-longest non-overlapping across the pattern list.
std::vector<AliasHit> alias_hits_in(const std::string& text, Span region,
                                    const std::vector<std::regex>& patterns) {
    std::vector<AliasHit> raw;
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        auto begin = std::sregex_iterator(text.begin() + static_cast<std::ptrdiff_t>(region.start),
                                          text.begin() + static_cast<std::ptrdiff_t>(region.end),
                                          patterns[p]);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            if (it->length(0) == 0) continue; // ignore empty matches
            const std::size_t start = region.start + static_cast<std::size_t>(it->position(0));
            raw.push_back({{start, start + static_cast<std::size_t>(it->length(0))}, p});
        }
    }
    std::sort(raw.begin(), raw.end(), [](const AliasHit& a, const AliasHit& b) {
        if (a.span.start != b.span.start) return a.span.start < b.span.start;
        if (a.span.end != b.span.end) return a.span.end > b.span.end;
        return a.pattern_index < b.pattern_index;
    });
    std::vector<AliasHit> kept;
    std::size_t covered = 0;
    for (const auto& hit : raw) {
        if (hit.span.start < covered) continue;
        kept.push_back(hit);
        covered = hit.span.end;
    }
    return kept;
}

/// Context regexes see the sentence extended over its adjacent terminator
/// runs, so cues like a leading or trailing '?' stay visible even though
/// the recorded sentence span excludes terminators.
bool sentence_matches_any(const std::string& text, Span sentence,
                          const std::vector<std::regex>& contexts) {
    std::size_t window_start = sentence.start;
    while (window_start > 0 && is_sentence_terminator(text[window_start - 1])) --window_start;
    std::size_t window_end = sentence.end;
    while (window_end < text.size() && is_sentence_terminator(text[window_end])) ++window_end;
    for (const auto& re : contexts) {
        if (std::regex_search(text.begin() + static_cast<std::ptrdiff_t>(window_start),
                              text.begin() + static_cast<std::ptrdiff_t>(window_end), re)) {
            return true;
        }
    }
    return false;
}

} // namespace

CascadeResult cascade_match(const Note& note, const DiseaseRuleSet& rules) {
    const std::string& original = note.text;
    std::string working = original;
    CascadeResult result;
    result.label = {note.note_id, rules.disease, Label::Unmentioned};
    bool any_q = false, any_a = false, any_p = false;

    // Passes 1 and 2: context-gated sentence matches (Questionable first,
    // then Absent on the blanked text). Matched alias spans are blanked so
    // the next pass cannot re-report them, while every recorded offset
    // stays valid in the original text.
    struct ContextPass {
        MatchCategory category;
        const std::vector<std::regex>* contexts;
        bool* flag;
    };
    const ContextPass passes[] = {
        {MatchCategory::Questionable, &rules.questionable_context, &any_q},
        {MatchCategory::Absent, &rules.absent_context, &any_a},
    };
    for (const auto& pass : passes) {
        if (pass.contexts->empty()) continue;
        for (const Span sentence : sentence_spans(working)) {
            if (!sentence_matches_any(working, sentence, *pass.contexts)) continue;
            for (const AliasHit& hit : alias_hits_in(working, sentence, rules.alias_patterns)) {
                RegexMatchRecord rec;
                rec.note_id = note.note_id;
                rec.disease = rules.disease;
                rec.category = pass.category;
                rec.dis_alias = original.substr(hit.span.start, hit.span.length());
                rec.dis_pos = hit.span;
                rec.sentence = original.substr(sentence.start, sentence.length());
                rec.sen_pos = sentence;
                result.records.push_back(std::move(rec));
                working = blank_span(working, hit.span);
                *pass.flag = true;
            }
        }
    }

    // Pass 3: whatever alias mentions survive are plain Present matches.
    for (const AliasHit& hit : alias_hits_in(working, {0, working.size()}, rules.alias_patterns)) {
        RegexMatchRecord rec;
        rec.note_id = note.note_id;
        rec.disease = rules.disease;
        rec.category = MatchCategory::Present;
        rec.dis_alias = original.substr(hit.span.start, hit.span.length());
        rec.dis_pos = hit.span;
        result.records.push_back(std::move(rec));
        any_p = true;
    }

    if (any_q) result.label.label = Label::Questionable;
    else if (any_a) result.label.label = Label::Absent;
    else if (any_p) result.label.label = Label::Present;
    return result;
}

RuleLabels rule_labels_all(const Notes& notes, const DiseaseRuleSets& rulesets) {
    RuleLabels labels;
    labels.reserve(notes.size() * rulesets.size());
    for (const auto& note : notes) {
        for (const auto& rules : rulesets) {
            labels.push_back(cascade_match(note, rules).label);
        }
    }
    return labels;
}

namespace {

std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::regex compile_rule_regex(const std::string& pattern, const std::string& origin,
                              std::size_t lineno) {
    try {
        return std::regex(pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
        throw BadRuleFile(origin + ":" + std::to_string(lineno) + ": bad regex '" + pattern +
                          "': " + e.what());
    }
}

} // namespace

DiseaseRuleSet parse_rule_file(std::string_view content, const std::string& origin) {
    DiseaseRuleSet rules;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string trimmed = strip(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const std::size_t colon = trimmed.find(':');
        if (colon == std::string::npos) {
            throw BadRuleFile(origin + ":" + std::to_string(lineno) + ": expected 'key: value'");
        }
        const std::string key = strip(trimmed.substr(0, colon));
        const std::string value = strip(trimmed.substr(colon + 1));
        if (value.empty()) {
            throw BadRuleFile(origin + ":" + std::to_string(lineno) + ": empty value for " + key);
        }
        if (key == "disease") {
            if (!rules.disease.empty()) {
                throw BadRuleFile(origin + ":" + std::to_string(lineno) + ": duplicate disease line");
            }
            rules.disease = value;
        } else if (key == "alias") {
            rules.alias_texts.push_back(value);
            rules.alias_patterns.push_back(compile_rule_regex(value, origin, lineno));
        } else if (key == "questionable") {
            rules.questionable_texts.push_back(value);
            rules.questionable_context.push_back(compile_rule_regex(value, origin, lineno));
        } else if (key == "absent") {
            rules.absent_texts.push_back(value);
            rules.absent_context.push_back(compile_rule_regex(value, origin, lineno));
        } else {
            throw BadRuleFile(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (rules.disease.empty()) throw BadRuleFile(origin + ": missing 'disease:' line");
    if (rules.alias_patterns.empty()) throw BadRuleFile(origin + ": at least one 'alias:' required");
    return rules;
}

DiseaseRuleSet load_rule_file(const std::string& path) {
    return parse_rule_file(csv::read_text_file(path), path);
}

DiseaseRuleSets load_rules_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".rules") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw BadRuleFile("no .rules files in " + dir);
    DiseaseRuleSets sets;
    for (const auto& path : paths) sets.push_back(load_rule_file(path));
    return sets;
}

void write_match_csv(const std::string& path, const RegexMatchRecords& records) {
    std::string out =
        "note_id,disease,category,dis_alias,dis_start,dis_end,sentence,sen_start,sen_end\n";
    for (const auto& r : records) {
        out += csv::join_row({std::to_string(r.note_id), r.disease, std::string(to_string(r.category)),
                              r.dis_alias, std::to_string(r.dis_pos.start),
                              std::to_string(r.dis_pos.end), r.sentence.value_or(""),
                              r.sen_pos ? std::to_string(r.sen_pos->start) : "",
                              r.sen_pos ? std::to_string(r.sen_pos->end) : ""});
    }
    csv::write_text_file(path, out);
}

RegexMatchRecords read_match_csv(const std::string& path) {
    auto rows = csv::read_file(path);
    RegexMatchRecords records;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 9) throw Error("match csv: expected 9 fields at row " + std::to_string(i));
        RegexMatchRecord rec;
        rec.note_id = std::stoll(r[0]);
        rec.disease = r[1];
        rec.category = category_from_string(r[2]);
        rec.dis_alias = r[3];
        rec.dis_pos = {static_cast<std::size_t>(std::stoull(r[4])),
                       static_cast<std::size_t>(std::stoull(r[5]))};
        if (!r[7].empty()) {
            rec.sentence = r[6];
            rec.sen_pos = Span{static_cast<std::size_t>(std::stoull(r[7])),
                               static_cast<std::size_t>(std::stoull(r[8]))};
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_rule_label_csv(const std::string& path, const RuleLabels& labels) {
    std::string out = "note_id,disease,label\n";
    for (const auto& l : labels) {
        out += csv::join_row({std::to_string(l.note_id), l.disease, std::string(to_string(l.label))});
    }
    csv::write_text_file(path, out);
}

RuleLabels read_rule_label_csv(const std::string& path) {
    auto rows = csv::read_file(path);
    RuleLabels labels;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 3) throw Error("rule label csv: expected 3 fields at row " + std::to_string(i));
        labels.push_back({std::stoll(r[0]), r[1], label_from_string(r[2])});
    }
    return labels;
}

} // namespace phenopipe
