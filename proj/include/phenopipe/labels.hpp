#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phenopipe {

/// Document-level disease status. The declaration order is the fixed class
/// ordering used for tie-breaking everywhere (alphabetical).
enum class Label : int {
    Absent = 0,
    Present = 1,
    Questionable = 2,
    Unmentioned = 3,
};

std::string_view to_string(Label label);
Label label_from_string(std::string_view s);

/// Which judgment track a label belongs to. Textual reflects what the note
/// literally asserts (includes Unmentioned); intuitive is the clinical
/// inference (Present/Absent/Questionable only).
enum class Source { Intuitive, Textual };

std::string_view to_string(Source source);
Source source_from_string(std::string_view s);

/// Unmentioned maps to Absent on the intuitive track.
Label to_intuitive(Label textual);

struct Judgment {
    std::int64_t note_id = 0;
    std::string disease;
    Source source = Source::Textual;
    Label label = Label::Unmentioned;
};

using Judgments = std::vector<Judgment>;

/// CSV `note_id,disease,source,label` with header.
void write_judgment_csv(const std::string& path, const Judgments& judgments);
Judgments read_judgment_csv(const std::string& path);

} // namespace phenopipe
