#include "phenopipe/store.hpp"

#include <sqlite3.h>

#include <filesystem>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"
#include "phenopipe/text.hpp"

namespace phenopipe {

namespace {

// Table 1 column types are not specified by the CDM description we follow;
// the widths below are artifact decisions recorded here in the DDL.
const char kSchemaSql[] = R"sql(-- phenopipe annotation store schema
CREATE TABLE NOTE (
  note_id     INTEGER PRIMARY KEY,
  source_id   TEXT    NOT NULL,
  note_text   TEXT    NOT NULL,
  char_count  INTEGER NOT NULL
);

-- note_nlp_concept_id holds a UMLS CUI for concept annotations and a
-- `disease:category` code (category in Questionable/Absent/Present) for
-- regular-expression match annotations.
CREATE TABLE NOTE_NLP (
  note_nlp_id          INTEGER PRIMARY KEY,
  note_id              INTEGER NOT NULL REFERENCES NOTE(note_id),
  section_concept_id   INTEGER NOT NULL,
  snippet              TEXT    NOT NULL,
  offset               INTEGER NOT NULL,
  lexical_variant      TEXT    NOT NULL,
  note_nlp_concept_id  TEXT    NOT NULL,
  nlp_system           TEXT    NOT NULL,
  nlp_date_time        TEXT    NOT NULL
);
)sql";

void check(sqlite3* db, int rc, const char* what) {
    if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW) {
        throw IoFailure(std::string(what) + ": " + sqlite3_errmsg(db));
    }
}

class Stmt {
public:
    Stmt(sqlite3* db, const std::string& sql) : db_(db) {
        check(db, sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr), "prepare");
    }
    ~Stmt() { sqlite3_finalize(stmt_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    void bind(int idx, std::int64_t v) { check(db_, sqlite3_bind_int64(stmt_, idx, v), "bind"); }
    void bind(int idx, const std::string& v) {
        check(db_, sqlite3_bind_text(stmt_, idx, v.data(), static_cast<int>(v.size()),
                                     SQLITE_TRANSIENT),
              "bind");
    }
    bool step() {
        const int rc = sqlite3_step(stmt_);
        check(db_, rc, "step");
        return rc == SQLITE_ROW;
    }
    std::int64_t column_int(int idx) const { return sqlite3_column_int64(stmt_, idx); }
    std::string column_text(int idx) const {
        const unsigned char* p = sqlite3_column_text(stmt_, idx);
        const int n = sqlite3_column_bytes(stmt_, idx);
        return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(n)) : "";
    }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

std::string snippet_window(const std::string& text, std::size_t offset, std::size_t match_len) {
    const std::size_t begin = offset > kSnippetWindow ? offset - kSnippetWindow : 0;
    const std::size_t end = std::min(text.size(), offset + match_len + kSnippetWindow);
    return text.substr(begin, end - begin);
}

} // namespace

Store::Store(const std::string& path) {
    if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
        const std::string msg = db_ ? sqlite3_errmsg(db_) : "unknown error";
        throw IoFailure("cannot open store at " + path + ": " + msg);
    }
    char* err = nullptr;
    if (sqlite3_exec(db_, "PRAGMA foreign_keys = ON;", nullptr, nullptr, &err) != SQLITE_OK) {
        throw IoFailure(std::string("pragma failed: ") + (err ? err : ""));
    }
    // create tables on first use
    Stmt probe(db_, "SELECT count(*) FROM sqlite_master WHERE type='table' AND name='NOTE'");
    probe.step();
    if (probe.column_int(0) == 0) {
        if (sqlite3_exec(db_, kSchemaSql, nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "";
            sqlite3_free(err);
            throw IoFailure("schema creation failed: " + msg);
        }
    }
}

Store::~Store() {
    if (db_) sqlite3_close(db_);
}

Store::Store(Store&& other) noexcept : db_(other.db_) { other.db_ = nullptr; }

Store& Store::operator=(Store&& other) noexcept {
    if (this != &other) {
        if (db_) sqlite3_close(db_);
        db_ = other.db_;
        other.db_ = nullptr;
    }
    return *this;
}

std::int64_t Store::persist_note(const Note& note) {
    if (note.text.empty()) throw Error("persist_note: empty canonical text");
    if (find_note(note.note_id)) {
        throw DuplicateNoteId("persist_note: note_id " + std::to_string(note.note_id) +
                              " already stored");
    }
    Stmt stmt(db_, "INSERT INTO NOTE (note_id, source_id, note_text, char_count) VALUES (?,?,?,?)");
    stmt.bind(1, note.note_id);
    stmt.bind(2, note.source_id);
    stmt.bind(3, note.text);
    stmt.bind(4, static_cast<std::int64_t>(note.char_count()));
    stmt.step();
    return note.note_id;
}

std::int64_t Store::insert_note_nlp(const NoteNlpRow& row) {
    Stmt stmt(db_,
              "INSERT INTO NOTE_NLP (note_nlp_id, note_id, section_concept_id, snippet, offset, "
              "lexical_variant, note_nlp_concept_id, nlp_system, nlp_date_time) "
              "VALUES (?,?,?,?,?,?,?,?,?)");
    // parameter 1 left unbound (NULL) when id is 0: sqlite assigns max+1
    if (row.note_nlp_id > 0) stmt.bind(1, row.note_nlp_id);
    stmt.bind(2, row.note_id);
    stmt.bind(3, row.section_concept_id);
    stmt.bind(4, row.snippet);
    stmt.bind(5, row.offset);
    stmt.bind(6, row.lexical_variant);
    stmt.bind(7, row.note_nlp_concept_id);
    stmt.bind(8, row.nlp_system);
    stmt.bind(9, row.nlp_date_time);
    stmt.step();
    return sqlite3_last_insert_rowid(db_);
}

std::int64_t Store::persist_concept(const ConceptAnnotation& ann, const std::string& nlp_system,
                                    const std::string& nlp_date_time) {
    const auto note = find_note(ann.note_id);
    if (!note) throw MissingNote("persist_concept: note " + std::to_string(ann.note_id));
    if (ann.start >= static_cast<std::size_t>(note->char_count)) {
        throw OffsetBeyondNote("persist_concept: offset " + std::to_string(ann.start) +
                               " beyond note of " + std::to_string(note->char_count) + " chars");
    }
    NoteNlpRow row;
    row.note_id = ann.note_id;
    row.section_concept_id = ann.section_concept_id;
    const Span sent = sentence_at(note->note_text, ann.start);
    row.snippet = sent.length() > 0
                      ? note->note_text.substr(sent.start, sent.length())
                      : snippet_window(note->note_text, ann.start, ann.lexical_variant.size());
    row.offset = static_cast<std::int64_t>(ann.start);
    row.lexical_variant = ann.lexical_variant;
    row.note_nlp_concept_id = ann.cui;
    row.nlp_system = nlp_system;
    row.nlp_date_time = nlp_date_time;
    return insert_note_nlp(row);
}

std::int64_t Store::persist_regex_match(const RegexMatchRecord& rec, const SectionSpans& spans,
                                        const std::string& nlp_system,
                                        const std::string& nlp_date_time) {
    const auto note = find_note(rec.note_id);
    if (!note) throw MissingNote("persist_regex_match: note " + std::to_string(rec.note_id));
    if (rec.dis_pos.start >= static_cast<std::size_t>(note->char_count)) {
        throw OffsetBeyondNote("persist_regex_match: offset " + std::to_string(rec.dis_pos.start) +
                               " beyond note of " + std::to_string(note->char_count) + " chars");
    }
    NoteNlpRow row;
    row.note_id = rec.note_id;
    row.section_concept_id = section_of(rec.dis_pos.start, spans);
    row.snippet = rec.sentence
                      ? *rec.sentence
                      : snippet_window(note->note_text, rec.dis_pos.start, rec.dis_pos.length());
    row.offset = static_cast<std::int64_t>(rec.dis_pos.start);
    row.lexical_variant = rec.dis_alias;
    row.note_nlp_concept_id = rec.disease + ":" + std::string(to_string(rec.category));
    row.nlp_system = nlp_system;
    row.nlp_date_time = nlp_date_time;
    return insert_note_nlp(row);
}

std::vector<NoteNlpRow> Store::query_annotations(const AnnotationFilter& filter) const {
    std::string sql =
        "SELECT note_nlp_id, note_id, section_concept_id, snippet, offset, lexical_variant, "
        "note_nlp_concept_id, nlp_system, nlp_date_time FROM NOTE_NLP WHERE 1=1";
    if (filter.note_id) sql += " AND note_id = ?";
    if (filter.concept_id) sql += " AND note_nlp_concept_id = ?";
    if (filter.section_concept_id) sql += " AND section_concept_id = ?";
    sql += " ORDER BY note_nlp_id";
    Stmt stmt(db_, sql);
    int idx = 1;
    if (filter.note_id) stmt.bind(idx++, *filter.note_id);
    if (filter.concept_id) stmt.bind(idx++, *filter.concept_id);
    if (filter.section_concept_id) stmt.bind(idx++, *filter.section_concept_id);
    std::vector<NoteNlpRow> rows;
    while (stmt.step()) {
        NoteNlpRow row;
        row.note_nlp_id = stmt.column_int(0);
        row.note_id = stmt.column_int(1);
        row.section_concept_id = stmt.column_int(2);
        row.snippet = stmt.column_text(3);
        row.offset = stmt.column_int(4);
        row.lexical_variant = stmt.column_text(5);
        row.note_nlp_concept_id = stmt.column_text(6);
        row.nlp_system = stmt.column_text(7);
        row.nlp_date_time = stmt.column_text(8);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<NoteRow> Store::all_notes() const {
    Stmt stmt(db_, "SELECT note_id, source_id, note_text, char_count FROM NOTE ORDER BY note_id");
    std::vector<NoteRow> rows;
    while (stmt.step()) {
        rows.push_back({stmt.column_int(0), stmt.column_text(1), stmt.column_text(2),
                        stmt.column_int(3)});
    }
    return rows;
}

std::optional<NoteRow> Store::find_note(std::int64_t note_id) const {
    Stmt stmt(db_, "SELECT note_id, source_id, note_text, char_count FROM NOTE WHERE note_id = ?");
    stmt.bind(1, note_id);
    if (!stmt.step()) return std::nullopt;
    return NoteRow{stmt.column_int(0), stmt.column_text(1), stmt.column_text(2), stmt.column_int(3)};
}

void Store::export_csv(const std::string& out_dir) const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    std::string notes_csv = "note_id,source_id,note_text,char_count\n";
    for (const auto& n : all_notes()) {
        notes_csv += csv::join_row(
            {std::to_string(n.note_id), n.source_id, n.note_text, std::to_string(n.char_count)});
    }
    csv::write_text_file(out_dir + "/NOTE.csv", notes_csv);

    std::string nlp_csv =
        "note_nlp_id,note_id,section_concept_id,snippet,offset,lexical_variant,"
        "note_nlp_concept_id,nlp_system,nlp_date_time\n";
    for (const auto& r : query_annotations()) {
        nlp_csv += csv::join_row({std::to_string(r.note_nlp_id), std::to_string(r.note_id),
                                  std::to_string(r.section_concept_id), r.snippet,
                                  std::to_string(r.offset), r.lexical_variant,
                                  r.note_nlp_concept_id, r.nlp_system, r.nlp_date_time});
    }
    csv::write_text_file(out_dir + "/NOTE_NLP.csv", nlp_csv);
    csv::write_text_file(out_dir + "/schema.sql", kSchemaSql);
}

void Store::import_csv(const std::string& dir) {
    if (!all_notes().empty()) throw Error("import_csv: store is not empty");
    const auto note_rows = csv::read_file(dir + "/NOTE.csv");
    char* err = nullptr;
    sqlite3_exec(db_, "BEGIN", nullptr, nullptr, &err);
    for (std::size_t i = 1; i < note_rows.size(); ++i) {
        const auto& r = note_rows[i];
        if (r.size() != 4) throw Error("NOTE.csv: expected 4 fields at row " + std::to_string(i));
        Stmt stmt(db_, "INSERT INTO NOTE (note_id, source_id, note_text, char_count) VALUES (?,?,?,?)");
        stmt.bind(1, static_cast<std::int64_t>(std::stoll(r[0])));
        stmt.bind(2, r[1]);
        stmt.bind(3, r[2]);
        stmt.bind(4, static_cast<std::int64_t>(std::stoll(r[3])));
        stmt.step();
    }
    const auto nlp_rows = csv::read_file(dir + "/NOTE_NLP.csv");
    for (std::size_t i = 1; i < nlp_rows.size(); ++i) {
        const auto& r = nlp_rows[i];
        if (r.size() != 9) throw Error("NOTE_NLP.csv: expected 9 fields at row " + std::to_string(i));
        NoteNlpRow row;
        row.note_nlp_id = std::stoll(r[0]);
        row.note_id = std::stoll(r[1]);
        row.section_concept_id = std::stoll(r[2]);
        row.snippet = r[3];
        row.offset = std::stoll(r[4]);
        row.lexical_variant = r[5];
        row.note_nlp_concept_id = r[6];
        row.nlp_system = r[7];
        row.nlp_date_time = r[8];
        insert_note_nlp(row);
    }
    sqlite3_exec(db_, "COMMIT", nullptr, nullptr, &err);
}

const std::string& Store::schema_sql() {
    static const std::string sql = kSchemaSql;
    return sql;
}

} // namespace phenopipe
