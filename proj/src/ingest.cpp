#include "phenopipe/ingest.hpp"

#include <sstream>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"
#include "phenopipe/text.hpp"

namespace phenopipe {

RawCorpus load_corpus(const std::string& path) {
    return {path, csv::read_text_file(path)};
}

Notes split_master(const RawCorpus& corpus, std::string_view sentinel) {
    if (sentinel.empty()) throw Error("split_master: empty sentinel");
    if (!is_valid_utf8(corpus.text)) {
        throw InvalidEncoding("split_master: corpus is not valid UTF-8: " + corpus.path);
    }

    Notes notes;
    std::size_t pos = 0;
    std::int64_t segment_index = 0;
    while (pos <= corpus.text.size()) {
        const std::size_t hit = corpus.text.find(sentinel, pos);
        const std::size_t end = (hit == std::string::npos) ? corpus.text.size() : hit;
        const std::string segment = corpus.text.substr(pos, end - pos);
        ++segment_index;
        if (!is_blank(segment)) {
            Note note;
            note.note_id = static_cast<std::int64_t>(notes.size()) + 1;
            note.source_id = "record_" + std::to_string(segment_index);
            note.original_text = segment;
            note.text = segment;
            notes.push_back(std::move(note));
        }
        if (hit == std::string::npos) break;
        pos = hit + sentinel.size();
    }
    if (notes.empty()) throw EmptyCorpus("split_master: no non-blank record segment in " + corpus.path);
    return notes;
}

std::string deabbreviate(const std::string& text, const std::vector<AbbreviationRule>& rules) {
    std::string current = text;
    for (const auto& rule : rules) {
        current = std::regex_replace(current, rule.pattern, rule.replacement);
    }
    return current;
}

void deabbreviate_notes(Notes& notes, const std::vector<AbbreviationRule>& rules) {
    for (auto& note : notes) note.text = deabbreviate(note.original_text, rules);
}

std::vector<AbbreviationRule> parse_abbreviation_rules(std::string_view content) {
    std::vector<AbbreviationRule> rules;
    std::size_t lineno = 0;
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw Error("abbreviation rule line " + std::to_string(lineno) + ": missing TAB separator");
        }
        AbbreviationRule rule;
        rule.rule_id = "abbrev_" + std::to_string(lineno);
        rule.pattern_text = line.substr(0, tab);
        rule.replacement = line.substr(tab + 1);
        if (rule.pattern_text.empty() || rule.replacement.empty()) {
            throw Error("abbreviation rule line " + std::to_string(lineno) + ": empty pattern or replacement");
        }
        try {
            rule.pattern = std::regex(rule.pattern_text);
        } catch (const std::regex_error& e) {
            throw Error("abbreviation rule line " + std::to_string(lineno) + ": bad pattern: " + e.what());
        }
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<AbbreviationRule> load_abbreviation_rules(const std::string& path) {
    return parse_abbreviation_rules(csv::read_text_file(path));
}

namespace {

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string export_record_xml(const Note& note) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<record id=\"" + std::to_string(note.note_id) + "\">";
    out += xml_escape(note.text);
    out += "</record>\n";
    return out;
}

} // namespace phenopipe
