#include "phenopipe/concepts.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"
#include "phenopipe/text.hpp"

namespace phenopipe {

namespace {

bool valid_cui(std::string_view cui) {
    if (cui.size() != 8 || cui[0] != 'C') return false;
    return std::all_of(cui.begin() + 1, cui.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

} // namespace

LexiconExtractor::LexiconExtractor(Lexicon lexicon) : lexicon_(std::move(lexicon)), buckets_(256) {
    std::map<std::string, const LexiconEntry*> seen;
    for (auto& entry : lexicon_) {
        if (entry.surface.empty()) throw Error("lexicon: empty surface");
        if (entry.surface != to_lower(entry.surface)) {
            throw Error("lexicon: surface must be lowercase: " + entry.surface);
        }
        if (!valid_cui(entry.cui)) throw Error("lexicon: bad CUI '" + entry.cui + "' for " + entry.surface);
        if (!seen.emplace(entry.surface, &entry).second) {
            throw Error("lexicon: duplicate surface: " + entry.surface);
        }
        buckets_[static_cast<unsigned char>(entry.surface[0])].push_back(&entry);
    }
    for (auto& bucket : buckets_) {
        std::sort(bucket.begin(), bucket.end(), [](const LexiconEntry* a, const LexiconEntry* b) {
            if (a->surface.size() != b->surface.size()) return a->surface.size() > b->surface.size();
            return a->surface < b->surface;
        });
    }
}

ConceptAnnotations LexiconExtractor::extract(const Note& note, const SectionSpans& spans) const {
    ConceptAnnotations anns;
    const std::string lower = to_lower(note.text);
    std::size_t pos = 0;
    while (pos < lower.size()) {
        // candidate matches start on token boundaries only
        if (is_word_char(lower[pos]) && pos > 0 && is_word_char(lower[pos - 1])) {
            ++pos;
            continue;
        }
        const LexiconEntry* best = nullptr;
        for (const LexiconEntry* entry : buckets_[static_cast<unsigned char>(lower[pos])]) {
            const std::size_t end = pos + entry->surface.size();
            if (end > lower.size()) continue;
            if (lower.compare(pos, entry->surface.size(), entry->surface) != 0) continue;
            if (!on_token_boundaries(lower, pos, end)) continue;
            best = entry; // buckets are sorted longest first
            break;
        }
        if (best) {
            const std::size_t end = pos + best->surface.size();
            ConceptAnnotation ann;
            ann.note_id = note.note_id;
            ann.cui = best->cui;
            ann.semantic_type = best->semantic_type;
            ann.lexical_variant = note.text.substr(pos, best->surface.size());
            ann.start = pos;
            ann.end = end;
            ann.section_concept_id = section_of(pos, spans);
            anns.push_back(std::move(ann));
            pos = end;
        } else {
            ++pos;
        }
    }
    return anns;
}

ConceptAnnotations extract_concepts(const Note& note, const Lexicon& lexicon,
                                    const SectionSpans& spans) {
    return LexiconExtractor(lexicon).extract(note, spans);
}

ConceptAnnotations filter_by_semantic_types(const ConceptAnnotations& anns,
                                            const SemanticTypeFilter& filter) {
    if (filter.allowed.empty()) throw Error("semantic type filter must be non-empty when applied");
    ConceptAnnotations out;
    for (const auto& a : anns) {
        if (filter.allowed.count(a.semantic_type)) out.push_back(a);
    }
    return out;
}

ConceptAnnotations drop_section(const ConceptAnnotations& anns, std::int64_t section_concept_id) {
    ConceptAnnotations out;
    for (const auto& a : anns) {
        if (a.section_concept_id != section_concept_id) out.push_back(a);
    }
    return out;
}

Lexicon parse_lexicon(std::string_view content) {
    Lexicon lexicon;
    auto rows = csv::parse(content);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i == 0 && !r.empty() && r[0] == "surface") continue; // header
        if (r.empty() || (r.size() == 1 && r[0].empty())) continue;
        if (!r.empty() && !r[0].empty() && r[0][0] == '#') continue;
        if (r.size() != 3) throw Error("lexicon: expected 3 fields at row " + std::to_string(i + 1));
        lexicon.push_back({r[0], r[1], r[2]});
    }
    return lexicon;
}

Lexicon load_lexicon(const std::string& path) {
    return parse_lexicon(csv::read_text_file(path));
}

void write_annotation_csv(const std::string& path, const ConceptAnnotations& anns) {
    std::string out = "note_id,cui,semantic_type,lexical_variant,start,end,section_concept_id\n";
    for (const auto& a : anns) {
        out += csv::join_row({std::to_string(a.note_id), a.cui, a.semantic_type, a.lexical_variant,
                              std::to_string(a.start), std::to_string(a.end),
                              std::to_string(a.section_concept_id)});
    }
    csv::write_text_file(path, out);
}

ConceptAnnotations read_annotation_csv(const std::string& path) {
    auto rows = csv::read_file(path);
    ConceptAnnotations anns;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 7) throw Error("annotation csv: expected 7 fields at row " + std::to_string(i));
        ConceptAnnotation a;
        a.note_id = std::stoll(r[0]);
        a.cui = r[1];
        a.semantic_type = r[2];
        a.lexical_variant = r[3];
        a.start = static_cast<std::size_t>(std::stoull(r[4]));
        a.end = static_cast<std::size_t>(std::stoull(r[5]));
        a.section_concept_id = std::stoll(r[6]);
        anns.push_back(std::move(a));
    }
    return anns;
}

const std::set<std::string>& clinical_semantic_types() {
    static const std::set<std::string> kTypes = {
        "T017", "T022", "T023", "T033", "T034", "T047", "T048", "T049",
        "T059", "T060", "T061", "T121", "T122", "T123", "T184",
    };
    return kTypes;
}

} // namespace phenopipe
