#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phenopipe/concepts.hpp"
#include "phenopipe/note.hpp"
#include "phenopipe/rules.hpp"
#include "phenopipe/sections.hpp"

struct sqlite3;

namespace phenopipe {

struct NoteRow {
    std::int64_t note_id = 0;
    std::string source_id;
    std::string note_text;
    std::int64_t char_count = 0;
};

/// One NOTE_NLP row; the nine data elements of the CDM annotation table.
struct NoteNlpRow {
    std::int64_t note_nlp_id = 0;
    std::int64_t note_id = 0;
    std::int64_t section_concept_id = 0;
    std::string snippet;
    std::int64_t offset = 0;
    std::string lexical_variant;
    std::string note_nlp_concept_id; // CUI, or `disease:category` for regex matches
    std::string nlp_system;
    std::string nlp_date_time; // ISO-8601, injected by the caller
};

struct AnnotationFilter {
    std::optional<std::int64_t> note_id;
    std::optional<std::string> concept_id;
    std::optional<std::int64_t> section_concept_id;
};

/// Embedded single-file relational store holding NOTE and NOTE_NLP.
/// Single writer, multi reader. The CSV/DDL export is the portability
/// surface: export -> import -> export round-trips byte-identically.
class Store {
public:
    /// Opens (creating when necessary) a store; ":memory:" for tests.
    explicit Store(const std::string& path);
    ~Store();
    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    std::int64_t persist_note(const Note& note);

    std::int64_t persist_concept(const ConceptAnnotation& ann, const std::string& nlp_system,
                                 const std::string& nlp_date_time);

    /// `spans` are the section spans of the record the match came from.
    std::int64_t persist_regex_match(const RegexMatchRecord& rec, const SectionSpans& spans,
                                     const std::string& nlp_system,
                                     const std::string& nlp_date_time);

    std::vector<NoteNlpRow> query_annotations(const AnnotationFilter& filter = {}) const;
    std::vector<NoteRow> all_notes() const;
    std::optional<NoteRow> find_note(std::int64_t note_id) const;

    /// Writes NOTE.csv, NOTE_NLP.csv and schema.sql into `out_dir`.
    void export_csv(const std::string& out_dir) const;

    /// Loads a previous export into this (empty) store, preserving ids.
    void import_csv(const std::string& dir);

    static const std::string& schema_sql();

private:
    std::int64_t insert_note_nlp(const NoteNlpRow& row); // row.note_nlp_id 0 = assign next
    sqlite3* db_ = nullptr;
};

/// Snippet fallback window when no sentence context exists.
inline constexpr std::size_t kSnippetWindow = 40;

} // namespace phenopipe
