#include "phenopipe/sections.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"

namespace phenopipe {

namespace {

struct HeadingHit {
    std::size_t start;
    std::size_t length;
    std::int64_t section_concept_id;
    std::string_view heading;
};

} // namespace

SectionSpans detect_sections(const Note& note, const SectionDict& dict) {
    if (dict.empty()) throw Error("detect_sections: empty section dictionary");
    if (note.text.empty()) throw Error("detect_sections: empty note text");

    std::vector<HeadingHit> hits;
    for (const auto& entry : dict) {
        std::size_t pos = 0;
        while ((pos = note.text.find(entry.heading, pos)) != std::string::npos) {
            hits.push_back({pos, entry.heading.size(), entry.section_concept_id, entry.heading});
            pos += 1;
        }
    }
    std::sort(hits.begin(), hits.end(), [](const HeadingHit& a, const HeadingHit& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.length > b.length;
    });
    for (std::size_t i = 1; i < hits.size(); ++i) {
        if (hits[i].start == hits[i - 1].start) {
            throw DuplicateHeadingAtSameOffset(
                "headings '" + std::string(hits[i - 1].heading) + "' and '" +
                std::string(hits[i].heading) + "' both match note " +
                std::to_string(note.note_id) + " at offset " + std::to_string(hits[i].start));
        }
    }
    // leftmost-longest: drop occurrences that begin inside an earlier hit
    std::vector<HeadingHit> kept;
    std::size_t covered_end = 0;
    for (const auto& hit : hits) {
        if (hit.start < covered_end) continue;
        kept.push_back(hit);
        covered_end = hit.start + hit.length;
    }

    SectionSpans spans;
    const std::size_t last = note.text.size() - 1;
    if (kept.empty()) {
        spans.push_back({note.note_id, kPreambleSectionId, 0, last});
        return spans;
    }
    if (kept.front().start > 0) {
        spans.push_back({note.note_id, kPreambleSectionId, 0, kept.front().start - 1});
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::size_t end = (i + 1 < kept.size()) ? kept[i + 1].start - 1 : last;
        spans.push_back({note.note_id, kept[i].section_concept_id, kept[i].start, end});
    }
    return spans;
}

std::int64_t section_of(std::size_t offset, const SectionSpans& spans) {
    if (spans.empty()) throw Error("section_of: no spans");
    if (offset > spans.back().end) {
        throw OffsetOutOfRange("section_of: offset " + std::to_string(offset) +
                               " beyond last span end " + std::to_string(spans.back().end));
    }
    auto it = std::upper_bound(spans.begin(), spans.end(), offset,
                               [](std::size_t off, const SectionSpan& s) { return off < s.start; });
    if (it == spans.begin()) throw OffsetOutOfRange("section_of: offset before first span");
    --it;
    return it->section_concept_id;
}

SectionDict parse_section_dict(std::string_view content) {
    SectionDict dict;
    std::set<std::string> headings;
    std::set<std::int64_t> ids;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw Error("section dict line " + std::to_string(lineno) + ": missing TAB separator");
        }
        SectionDictEntry entry;
        entry.section_concept_id = std::stoll(line.substr(0, tab));
        entry.heading = line.substr(tab + 1);
        if (entry.heading.empty()) {
            throw Error("section dict line " + std::to_string(lineno) + ": empty heading");
        }
        if (entry.section_concept_id == kPreambleSectionId) {
            throw Error("section dict line " + std::to_string(lineno) +
                        ": id 0 is reserved for the preamble");
        }
        if (!headings.insert(entry.heading).second) {
            throw Error("section dict line " + std::to_string(lineno) +
                        ": duplicate heading " + entry.heading);
        }
        if (!ids.insert(entry.section_concept_id).second) {
            throw Error("section dict line " + std::to_string(lineno) + ": duplicate id " +
                        std::to_string(entry.section_concept_id));
        }
        dict.push_back(std::move(entry));
    }
    return dict;
}

SectionDict load_section_dict(const std::string& path) {
    return parse_section_dict(csv::read_text_file(path));
}

void write_section_csv(const std::string& path, const SectionSpans& spans) {
    std::string out = "note_id,section_concept_id,start,end\n";
    for (const auto& s : spans) {
        out += csv::join_row({std::to_string(s.note_id), std::to_string(s.section_concept_id),
                              std::to_string(s.start), std::to_string(s.end)});
    }
    csv::write_text_file(path, out);
}

SectionSpans read_section_csv(const std::string& path) {
    auto rows = csv::read_file(path);
    SectionSpans spans;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 4) throw Error("section csv: expected 4 fields at row " + std::to_string(i));
        spans.push_back({std::stoll(r[0]), std::stoll(r[1]),
                         static_cast<std::size_t>(std::stoull(r[2])),
                         static_cast<std::size_t>(std::stoull(r[3]))});
    }
    return spans;
}

} // namespace phenopipe
