// phenopipe: portable NLP phenotyping pipeline over discharge summaries.
// Subcommands cover each stage; `pipeline` chains them end to end.

#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phenopipe/concepts.hpp"
#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"
#include "phenopipe/experiment.hpp"
#include "phenopipe/hybrid.hpp"
#include "phenopipe/ingest.hpp"
#include "phenopipe/labels.hpp"
#include "phenopipe/metrics.hpp"
#include "phenopipe/ml/classifier.hpp"
#include "phenopipe/ml/grid.hpp"
#include "phenopipe/rules.hpp"
#include "phenopipe/sections.hpp"
#include "phenopipe/store.hpp"
#include "phenopipe/synth.hpp"

namespace fs = std::filesystem;
using namespace phenopipe;

namespace {

Notes read_notes_dir(const std::string& dir) {
    Notes notes;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        Note note;
        note.note_id = std::stoll(entry.path().stem().string());
        note.source_id = entry.path().filename().string();
        note.text = csv::read_text_file(entry.path().string());
        note.original_text = note.text;
        notes.push_back(std::move(note));
    }
    std::sort(notes.begin(), notes.end(),
              [](const Note& a, const Note& b) { return a.note_id < b.note_id; });
    if (notes.empty()) throw Error("no .txt notes in " + dir);
    return notes;
}

std::map<std::int64_t, SectionSpans> group_spans(const SectionSpans& spans) {
    std::map<std::int64_t, SectionSpans> by_note;
    for (const auto& s : spans) by_note[s.note_id].push_back(s);
    return by_note;
}

std::string now_iso8601() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int cmd_ingest(const std::string& corpus, const std::string& abbrev, const std::string& sentinel,
               const std::string& out, const std::string& xml_dir) {
    Notes notes = split_master(load_corpus(corpus), sentinel);
    if (!abbrev.empty()) deabbreviate_notes(notes, load_abbreviation_rules(abbrev));
    fs::create_directories(out);
    for (const auto& note : notes) {
        csv::write_text_file(out + "/" + std::to_string(note.note_id) + ".txt", note.text);
    }
    if (!xml_dir.empty()) {
        fs::create_directories(xml_dir);
        for (const auto& note : notes) {
            csv::write_text_file(xml_dir + "/" + std::to_string(note.note_id) + ".xml",
                                 export_record_xml(note));
        }
    }
    std::cout << "ingested " << notes.size() << " notes into " << out << "\n";
    return 0;
}

int cmd_sectionize(const std::string& notes_dir, const std::string& sections_file,
                   const std::string& out) {
    const Notes notes = read_notes_dir(notes_dir);
    const SectionDict dict = load_section_dict(sections_file);
    SectionSpans all;
    for (const auto& note : notes) {
        const auto spans = detect_sections(note, dict);
        all.insert(all.end(), spans.begin(), spans.end());
    }
    write_section_csv(out, all);
    std::cout << "wrote " << all.size() << " section spans to " << out << "\n";
    return 0;
}

int cmd_extract(const std::string& notes_dir, const std::string& lexicon_file,
                const std::string& sections_file, const std::string& out) {
    const Notes notes = read_notes_dir(notes_dir);
    const auto spans_by_note = group_spans(read_section_csv(sections_file));
    const LexiconExtractor extractor(load_lexicon(lexicon_file));
    ConceptAnnotations all;
    for (const auto& note : notes) {
        const auto anns = extractor.extract(note, spans_by_note.at(note.note_id));
        all.insert(all.end(), anns.begin(), anns.end());
    }
    write_annotation_csv(out, all);
    std::cout << "wrote " << all.size() << " concept annotations to " << out << "\n";
    return 0;
}

int cmd_annotate(const std::string& notes_dir, const std::string& rules_dir,
                 const std::string& out, const std::string& labels_out) {
    const Notes notes = read_notes_dir(notes_dir);
    const DiseaseRuleSets rulesets = load_rules_dir(rules_dir);
    RegexMatchRecords records;
    RuleLabels labels;
    for (const auto& note : notes) {
        for (const auto& rules : rulesets) {
            auto result = cascade_match(note, rules);
            records.insert(records.end(), result.records.begin(), result.records.end());
            labels.push_back(result.label);
        }
    }
    write_match_csv(out, records);
    if (!labels_out.empty()) write_rule_label_csv(labels_out, labels);
    std::cout << "wrote " << records.size() << " regex match records to " << out << "\n";
    return 0;
}

int cmd_load(const std::string& annotations, const std::string& matches,
             const std::string& notes_dir, const std::string& sections_file,
             const std::string& db, const std::string& system, std::string timestamp) {
    if (timestamp.empty()) timestamp = now_iso8601();
    const Notes notes = read_notes_dir(notes_dir);
    Store store(db);
    for (const auto& note : notes) store.persist_note(note);
    std::size_t rows = 0;
    if (!annotations.empty()) {
        for (const auto& ann : read_annotation_csv(annotations)) {
            store.persist_concept(ann, system, timestamp);
            ++rows;
        }
    }
    if (!matches.empty()) {
        if (sections_file.empty()) throw Error("--matches requires --sections");
        const auto spans_by_note = group_spans(read_section_csv(sections_file));
        for (const auto& rec : read_match_csv(matches)) {
            store.persist_regex_match(rec, spans_by_note.at(rec.note_id), system, timestamp);
            ++rows;
        }
    }
    std::cout << "loaded " << notes.size() << " notes and " << rows << " annotations into " << db
              << "\n";
    return 0;
}

int cmd_export(const std::string& db, const std::string& out) {
    Store store(db);
    store.export_csv(out);
    std::cout << "exported NOTE.csv, NOTE_NLP.csv and schema.sql to " << out << "\n";
    return 0;
}

std::vector<std::string> labels_for_notes(const Judgments& judgments, const std::string& disease,
                                          Source source,
                                          const std::vector<std::int64_t>& note_ids) {
    std::map<std::int64_t, Label> by_note;
    for (const auto& j : judgments) {
        if (j.disease == disease && j.source == source) by_note[j.note_id] = j.label;
    }
    std::vector<std::string> out;
    for (std::int64_t id : note_ids) {
        const auto it = by_note.find(id);
        if (it == by_note.end()) {
            throw Error("no label for note " + std::to_string(id) + ", disease " + disease);
        }
        out.push_back(std::string(to_string(it->second)));
    }
    return out;
}

int cmd_train(const std::string& features, const std::string& labels, const std::string& algo,
              const std::string& grid_file, std::uint64_t seed, const std::string& out,
              const std::string& disease, const std::string& source_name) {
    const auto annotations = read_annotation_csv(features);
    const auto judgments = read_judgment_csv(labels);
    std::set<std::int64_t> id_set;
    for (const auto& a : annotations) id_set.insert(a.note_id);
    for (const auto& j : judgments) {
        if (j.disease == disease) id_set.insert(j.note_id);
    }
    const std::vector<std::int64_t> note_ids(id_set.begin(), id_set.end());

    const auto algorithm = ml::algorithm_from_string(algo);
    const auto X = ml::build_feature_matrix(note_ids, annotations);
    const auto y = labels_for_notes(judgments, disease, source_from_string(source_name), note_ids);

    ml::ParamGrid grid = ml::ParamGrid::defaults(algorithm);
    if (!grid_file.empty()) {
        grid = ml::ParamGrid::from_json(csv::read_text_file(grid_file), algorithm);
    }
    const auto search = ml::grid_search(algorithm, X, y, grid, 3, seed);
    const auto model = ml::train(algorithm, X, y, search.best_params, seed);
    model.save(out);
    std::cout << "trained " << algo << " (" << search.best_params.describe(algorithm)
              << ", cv folds " << search.folds_used << ") on " << X.rows() << " notes; model at "
              << out << "\n";
    return 0;
}

int cmd_predict(const std::string& model_file, const std::string& features,
                const std::string& disease, const std::string& source_name,
                const std::string& out) {
    const auto model = ml::Model::load(model_file);
    const auto annotations = read_annotation_csv(features);
    std::set<std::int64_t> id_set;
    for (const auto& a : annotations) id_set.insert(a.note_id);
    const std::vector<std::int64_t> note_ids(id_set.begin(), id_set.end());
    const auto X = ml::build_feature_matrix(note_ids, annotations, model.vocabulary);
    const auto predictions = model.predict(X);
    Judgments judgments;
    const Source source = source_from_string(source_name);
    for (std::size_t i = 0; i < note_ids.size(); ++i) {
        judgments.push_back({note_ids[i], disease, source, label_from_string(predictions[i])});
    }
    write_judgment_csv(out, judgments);
    std::cout << "wrote " << judgments.size() << " predictions to " << out << "\n";
    return 0;
}

int cmd_evaluate(const std::string& gold_file, const std::string& pred_file,
                 const std::string& out) {
    const auto gold = read_judgment_csv(gold_file);
    const auto pred = read_judgment_csv(pred_file);
    std::string csv_out = "source,p_micro,p_macro,r_micro,r_macro,f_micro,f_macro\n";
    for (Source source : {Source::Intuitive, Source::Textual}) {
        Judgments g, p;
        for (const auto& j : gold) {
            if (j.source == source) g.push_back(j);
        }
        for (const auto& j : pred) {
            if (j.source == source) p.push_back(j);
        }
        if (g.empty() && p.empty()) continue;
        const auto report = micro_macro_prf(g, p, labels_for(source));
        std::cout << to_string(source) << ":\n" << format_report(report);
        std::ostringstream row;
        row.precision(17);
        row << to_string(source) << "," << report.p_micro << "," << report.p_macro << ","
            << report.r_micro << "," << report.r_macro << "," << report.f_micro << ","
            << report.f_macro << "\n";
        csv_out += row.str();
    }
    if (!out.empty()) csv::write_text_file(out, csv_out);
    return 0;
}

int cmd_synth(const std::string& spec_file, std::uint64_t seed, const std::string& out) {
    const SynthSpec spec = SynthSpec::load(spec_file);
    const SynthResult result = generate_synthetic_corpus(spec, seed);
    fs::create_directories(out);
    csv::write_text_file(out + "/master.txt", result.master_text);
    write_judgment_csv(out + "/gold.csv", result.gold);
    std::cout << "generated " << spec.notes << " records (" << spec.diseases.size()
              << " diseases) under " << out << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_file, const std::string& out_dir) {
    const nlohmann::json doc = nlohmann::json::parse(csv::read_text_file(config_file));
    CorpusPaths paths;
    paths.corpus = doc.at("corpus").get<std::string>();
    paths.gold = doc.at("gold").get<std::string>();
    paths.abbrev = doc.at("abbrev").get<std::string>();
    paths.sections = doc.at("sections").get<std::string>();
    paths.lexicon = doc.at("lexicon").get<std::string>();
    paths.rules_dir = doc.at("rules_dir").get<std::string>();
    paths.sentinel = doc.value("sentinel", paths.sentinel);
    paths.family_history_heading =
        doc.value("family_history_heading", paths.family_history_heading);

    ExperimentOptions options;
    options.iterations = doc.value("iterations", options.iterations);
    if (doc.contains("algorithms")) {
        options.algorithms.clear();
        for (const auto& a : doc.at("algorithms")) {
            options.algorithms.push_back(ml::algorithm_from_string(a.get<std::string>()));
        }
    }
    if (doc.contains("sources")) {
        options.sources.clear();
        for (const auto& s : doc.at("sources")) {
            options.sources.push_back(source_from_string(s.get<std::string>()));
        }
    }
    options.test_fraction = doc.value("test_fraction", options.test_fraction);
    options.folds = doc.value("folds", options.folds);
    options.seed = doc.value("seed", options.seed);
    if (doc.contains("split_file")) {
        options.fixed_split = read_split_csv(doc.at("split_file").get<std::string>());
    }

    const ExperimentData data = prepare_experiment_data(paths);
    const auto cells = run_iterations(data, options);
    fs::create_directories(out_dir);
    write_cells_csv(out_dir + "/results.csv", cells);
    const std::string table = format_cells(cells);
    csv::write_text_file(out_dir + "/results.txt", table);
    std::cout << table;
    return 0;
}

int cmd_pipeline(const std::string& config_file) {
    const PipelineConfig config = PipelineConfig::load(config_file);
    const PipelineOutcome outcome = run_pipeline(config);
    std::cout << "pipeline complete: " << outcome.note_count << " notes\n";
    if (!config.gold.empty()) {
        std::cout << "rule-path recovery: textual " << outcome.rule_recovery_textual
                  << ", intuitive " << outcome.rule_recovery_intuitive << "\n";
        for (const auto& [source, report] : outcome.hybrid_metrics) {
            std::cout << to_string(source) << " test metrics:\n" << format_report(report);
        }
    }
    std::cout << "artifacts under " << config.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Portable NLP phenotyping pipeline"};
    app.require_subcommand(1);

    std::string corpus, abbrev, sentinel = std::string(kDefaultSentinel), out_dir, xml_dir;
    auto* ingest = app.add_subcommand("ingest", "Split a master corpus into canonical notes");
    ingest->add_option("--corpus", corpus, "Master corpus file")->required();
    ingest->add_option("--abbrev", abbrev, "Abbreviation rule file (pattern<TAB>replacement)");
    ingest->add_option("--sentinel", sentinel, "End-of-record sentinel");
    ingest->add_option("--out", out_dir, "Output directory for <note_id>.txt files")->required();
    ingest->add_option("--xml", xml_dir, "Optional directory for per-record XML exports");

    std::string notes_dir, sections_file, out_file;
    auto* sectionize = app.add_subcommand("sectionize", "Detect section boundaries");
    sectionize->add_option("--notes", notes_dir, "Directory of <note_id>.txt files")->required();
    sectionize->add_option("--sections", sections_file, "Section dictionary file")->required();
    sectionize->add_option("--out", out_file, "Output CSV")->required();

    std::string lexicon_file;
    auto* extract = app.add_subcommand("extract", "Extract lexicon concept annotations");
    extract->add_option("--notes", notes_dir, "Directory of notes")->required();
    extract->add_option("--lexicon", lexicon_file, "Lexicon CSV")->required();
    extract->add_option("--sections", sections_file, "Section span CSV from sectionize")->required();
    extract->add_option("--out", out_file, "Output CSV")->required();

    std::string rules_dir, labels_file;
    auto* annotate = app.add_subcommand("annotate", "Run the regex cascade");
    annotate->add_option("--notes", notes_dir, "Directory of notes")->required();
    annotate->add_option("--rules", rules_dir, "Directory of .rules files")->required();
    annotate->add_option("--out", out_file, "Match record CSV")->required();
    annotate->add_option("--labels", labels_file, "Optional per-document rule label CSV");

    std::string annotations_file, matches_file, db_file, system_name = "phenopipe 1.0", timestamp;
    auto* load = app.add_subcommand("load", "Persist notes and annotations into the store");
    load->add_option("--annotations", annotations_file, "Concept annotation CSV");
    load->add_option("--matches", matches_file, "Regex match CSV");
    load->add_option("--notes", notes_dir, "Directory of notes")->required();
    load->add_option("--sections", sections_file, "Section span CSV (needed with --matches)");
    load->add_option("--db", db_file, "Store file")->required();
    load->add_option("--system", system_name, "nlp_system column value");
    load->add_option("--timestamp", timestamp, "Fixed ISO-8601 nlp_date_time (default: now)");

    auto* export_cmd = app.add_subcommand("export", "Export the store as CSV + DDL");
    export_cmd->add_option("--db", db_file, "Store file")->required();
    export_cmd->add_option("--out", out_dir, "Output directory")->required();

    std::string features_file, algo = "dt", grid_file, model_file, disease,
                source_name = "textual";
    std::uint64_t seed = 42;
    auto* train = app.add_subcommand("train", "Grid-search and fit one classifier");
    train->add_option("--features", features_file, "Concept annotation CSV (from extract)")
        ->required();
    train->add_option("--labels", labels_file, "Judgment CSV (note_id,disease,source,label)")
        ->required();
    train->add_option("--algo", algo, "lr|svm|dt|rf")->required();
    train->add_option("--grid", grid_file, "Optional grid JSON (defaults to the standard grid)");
    train->add_option("--seed", seed, "Random seed");
    train->add_option("--out", model_file, "Model output path")->required();
    train->add_option("--disease", disease, "Disease the labels refer to")->required();
    train->add_option("--source", source_name, "intuitive|textual");

    auto* predict = app.add_subcommand("predict", "Apply a saved model");
    predict->add_option("--model", model_file, "Model file")->required();
    predict->add_option("--features", features_file, "Concept annotation CSV")->required();
    predict->add_option("--disease", disease, "Disease name for the output rows")->required();
    predict->add_option("--source", source_name, "intuitive|textual");
    predict->add_option("--out", out_file, "Prediction CSV")->required();

    std::string gold_file, pred_file;
    auto* evaluate = app.add_subcommand("evaluate", "Micro/macro P/R/F against gold");
    evaluate->add_option("--gold", gold_file, "Gold judgment CSV")->required();
    evaluate->add_option("--pred", pred_file, "Predicted judgment CSV")->required();
    evaluate->add_option("--out", out_file, "Optional metrics CSV");

    std::string spec_file;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with gold labels");
    synth->add_option("--spec", spec_file, "Generator spec JSON")->required();
    synth->add_option("--seed", seed, "Random seed");
    synth->add_option("--out", out_dir, "Output directory")->required();

    std::string config_file;
    auto* experiment = app.add_subcommand("experiment", "Run the six-iteration protocol");
    experiment->add_option("--config", config_file, "Experiment config JSON")->required();
    experiment->add_option("--out", out_dir, "Output directory")->required();

    auto* pipeline = app.add_subcommand("pipeline", "End-to-end run from a config file");
    pipeline->add_option("--config", config_file, "Pipeline config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(corpus, abbrev, sentinel, out_dir, xml_dir);
        if (sectionize->parsed()) return cmd_sectionize(notes_dir, sections_file, out_file);
        if (extract->parsed()) return cmd_extract(notes_dir, lexicon_file, sections_file, out_file);
        if (annotate->parsed()) return cmd_annotate(notes_dir, rules_dir, out_file, labels_file);
        if (load->parsed()) {
            return cmd_load(annotations_file, matches_file, notes_dir, sections_file, db_file,
                            system_name, timestamp);
        }
        if (export_cmd->parsed()) return cmd_export(db_file, out_dir);
        if (train->parsed()) {
            return cmd_train(features_file, labels_file, algo, grid_file, seed, model_file,
                             disease, source_name);
        }
        if (predict->parsed()) {
            return cmd_predict(model_file, features_file, disease, source_name, out_file);
        }
        if (evaluate->parsed()) return cmd_evaluate(gold_file, pred_file, out_file);
        if (synth->parsed()) return cmd_synth(spec_file, seed, out_dir);
        if (experiment->parsed()) return cmd_experiment(config_file, out_dir);
        if (pipeline->parsed()) return cmd_pipeline(config_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
