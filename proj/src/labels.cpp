#include "phenopipe/labels.hpp"

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"

namespace phenopipe {

std::string_view to_string(Label label) {
    switch (label) {
    case Label::Absent: return "Absent";
    case Label::Present: return "Present";
    case Label::Questionable: return "Questionable";
    case Label::Unmentioned: return "Unmentioned";
    }
    return "?";
}

Label label_from_string(std::string_view s) {
    if (s == "Absent") return Label::Absent;
    if (s == "Present") return Label::Present;
    if (s == "Questionable") return Label::Questionable;
    if (s == "Unmentioned") return Label::Unmentioned;
    throw Error("unknown label: " + std::string(s));
}

std::string_view to_string(Source source) {
    return source == Source::Intuitive ? "intuitive" : "textual";
}

Source source_from_string(std::string_view s) {
    if (s == "intuitive") return Source::Intuitive;
    if (s == "textual") return Source::Textual;
    throw Error("unknown source: " + std::string(s));
}

Label to_intuitive(Label textual) {
    return textual == Label::Unmentioned ? Label::Absent : textual;
}

void write_judgment_csv(const std::string& path, const Judgments& judgments) {
    std::string out = "note_id,disease,source,label\n";
    for (const auto& j : judgments) {
        out += csv::join_row({std::to_string(j.note_id), j.disease,
                              std::string(to_string(j.source)), std::string(to_string(j.label))});
    }
    csv::write_text_file(path, out);
}

Judgments read_judgment_csv(const std::string& path) {
    auto rows = csv::read_file(path);
    Judgments out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 4) throw Error("judgment csv: expected 4 fields at row " + std::to_string(i));
        out.push_back({std::stoll(r[0]), r[1], source_from_string(r[2]), label_from_string(r[3])});
    }
    return out;
}

} // namespace phenopipe
