#include "phenopipe/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"
#include "phenopipe/hybrid.hpp"
#include "phenopipe/ingest.hpp"
#include "phenopipe/store.hpp"

namespace phenopipe {

using nlohmann::json;

IterationSpec iteration_spec(char letter) {
    switch (letter) {
    case 'a': return {'a', false, false, false};
    case 'b': return {'b', true, false, false};
    case 'c': return {'c', true, true, false};
    case 'd': return {'d', false, false, true};
    case 'e': return {'e', true, false, true};
    case 'f': return {'f', true, true, true};
    default: throw BadConfig(std::string("unknown iteration letter: ") + letter);
    }
}

const std::vector<IterationSpec>& all_iterations() {
    static const std::vector<IterationSpec> kAll = {
        iteration_spec('a'), iteration_spec('b'), iteration_spec('c'),
        iteration_spec('d'), iteration_spec('e'), iteration_spec('f'),
    };
    return kAll;
}

std::vector<std::int64_t> ExperimentData::note_ids() const {
    std::vector<std::int64_t> ids;
    ids.reserve(notes.size());
    for (const auto& note : notes) ids.push_back(note.note_id);
    return ids;
}

ConceptAnnotations iteration_features(const ConceptAnnotations& annotations,
                                      const IterationSpec& spec,
                                      std::int64_t family_history_section_id) {
    ConceptAnnotations anns = annotations;
    if (spec.drop_family_history) anns = drop_section(anns, family_history_section_id);
    if (spec.semantic_filter) {
        anns = filter_by_semantic_types(anns, SemanticTypeFilter{clinical_semantic_types()});
    }
    return anns;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::map<std::int64_t, Label> gold_for(const Judgments& gold, const std::string& disease,
                                       Source source) {
    std::map<std::int64_t, Label> out;
    for (const auto& j : gold) {
        if (j.disease == disease && j.source == source) out[j.note_id] = j.label;
    }
    return out;
}

struct TaskSplit {
    std::vector<std::int64_t> train_ids;
    std::vector<std::int64_t> test_ids;
};

TaskSplit make_split(const std::vector<std::int64_t>& note_ids,
                     const std::map<std::int64_t, Label>& gold_map,
                     const ExperimentOptions& options, const std::string& disease, Source source) {
    TaskSplit split;
    if (options.fixed_split) {
        for (std::int64_t id : note_ids) {
            const auto it = options.fixed_split->find(id);
            (it != options.fixed_split->end() && it->second ? split.test_ids : split.train_ids)
                .push_back(id);
        }
        return split;
    }
    std::vector<std::string> labels;
    labels.reserve(note_ids.size());
    for (std::int64_t id : note_ids) {
        labels.push_back(std::string(to_string(gold_map.at(id))));
    }
    const auto seed =
        mix_seed(options.seed, disease + "|" + std::string(to_string(source)) + "|split");
    const auto idx = ml::stratified_split(labels, options.test_fraction, seed);
    for (std::size_t i : idx.train) split.train_ids.push_back(note_ids[i]);
    for (std::size_t i : idx.test) split.test_ids.push_back(note_ids[i]);
    return split;
}

std::string majority_label(const std::vector<std::string>& y) {
    std::map<std::string, std::size_t> counts;
    for (const auto& label : y) ++counts[label];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, count] : counts) {
        if (count > best_count) { // map order: ties keep the lowest label
            best = label;
            best_count = count;
        }
    }
    return best;
}

/// Grid-searched fit + predict with graceful handling of degenerate
/// training sets (tiny corpora leave some (disease, fold) tasks with a
/// single class; a constant prediction is the only sensible model there).
std::vector<std::string> fit_predict(ml::Algorithm algorithm, const ml::FeatureMatrix& X_train,
                                     const std::vector<std::string>& y_train,
                                     const ml::FeatureMatrix& X_test, int folds,
                                     std::uint64_t seed) {
    const std::set<std::string> distinct(y_train.begin(), y_train.end());
    if (y_train.size() < 2 || distinct.size() < 2) {
        const std::string constant = y_train.empty() ? "Unmentioned" : majority_label(y_train);
        return std::vector<std::string>(X_test.rows(), constant);
    }
    const ml::ParamGrid grid = ml::ParamGrid::defaults(algorithm);
    std::size_t min_class = y_train.size();
    {
        std::map<std::string, std::size_t> counts;
        for (const auto& label : y_train) ++counts[label];
        for (const auto& [label, count] : counts) min_class = std::min(min_class, count);
    }
    ml::Params params = grid.enumerate().front();
    if (min_class >= 2) {
        params = ml::grid_search(algorithm, X_train, y_train, grid, folds, seed).best_params;
    }
    const ml::Model model = ml::train(algorithm, X_train, y_train, params, seed);
    return model.predict(X_test);
}

} // namespace

std::vector<ExperimentCell> run_iterations(const ExperimentData& data,
                                           const ExperimentOptions& options) {
    const auto note_ids = data.note_ids();
    std::vector<ExperimentCell> cells;

    for (char letter : options.iterations) {
        const IterationSpec iteration = iteration_spec(letter);
        const ConceptAnnotations anns =
            iteration_features(data.annotations, iteration, data.family_history_section_id);

        for (ml::Algorithm algorithm : options.algorithms) {
            for (Source source : options.sources) {
                Judgments pooled_gold, pooled_pred;

                for (const std::string& disease : data.diseases) {
                    const auto gold_map = gold_for(data.gold, disease, source);
                    if (gold_map.size() != note_ids.size()) {
                        throw KeyMismatch("gold labels incomplete for " + disease);
                    }
                    const TaskSplit split =
                        make_split(note_ids, gold_map, options, disease, source);
                    if (split.test_ids.empty() || split.train_ids.empty()) continue;

                    const auto seed = mix_seed(options.seed, disease + "|" +
                                                                 std::string(to_string(source)) +
                                                                 "|" + iteration.letter);

                    std::vector<std::string> pred_labels;
                    if (!iteration.major_only) {
                        std::vector<std::string> y_train;
                        for (std::int64_t id : split.train_ids) {
                            y_train.push_back(std::string(to_string(gold_map.at(id))));
                        }
                        const auto X_train = ml::build_feature_matrix(split.train_ids, anns);
                        const auto X_test =
                            ml::build_feature_matrix(split.test_ids, anns, X_train.vocabulary);
                        pred_labels = fit_predict(algorithm, X_train, y_train, X_test,
                                                  options.folds, seed);
                    } else {
                        // majors trained on major-gold records only; minors come
                        // from the cascade labels
                        const auto rule_index =
                            index_rule_labels(data.rule_labels, disease, source);
                        std::vector<std::int64_t> major_train_ids;
                        std::vector<std::string> y_train;
                        for (std::int64_t id : split.train_ids) {
                            const Label g = gold_map.at(id);
                            if (is_major(g, source)) {
                                major_train_ids.push_back(id);
                                y_train.push_back(std::string(to_string(g)));
                            }
                        }
                        const auto X_train = ml::build_feature_matrix(major_train_ids, anns);
                        const auto X_test =
                            ml::build_feature_matrix(split.test_ids, anns, X_train.vocabulary);
                        const auto ml_labels = fit_predict(algorithm, X_train, y_train, X_test,
                                                           options.folds, seed);
                        pred_labels.reserve(split.test_ids.size());
                        for (std::size_t i = 0; i < split.test_ids.size(); ++i) {
                            const auto it = rule_index.find(split.test_ids[i]);
                            if (it == rule_index.end()) {
                                throw MissingRuleLabel("no cascade label for note " +
                                                       std::to_string(split.test_ids[i]) + ", " +
                                                       disease);
                            }
                            pred_labels.push_back(is_major(it->second, source)
                                                      ? ml_labels[i]
                                                      : std::string(to_string(it->second)));
                        }
                    }

                    for (std::size_t i = 0; i < split.test_ids.size(); ++i) {
                        pooled_gold.push_back(
                            {split.test_ids[i], disease, source, gold_map.at(split.test_ids[i])});
                        pooled_pred.push_back({split.test_ids[i], disease, source,
                                               label_from_string(pred_labels[i])});
                    }
                }

                ExperimentCell cell;
                cell.iteration = iteration.letter;
                cell.algorithm = algorithm;
                cell.source = source;
                cell.report = micro_macro_prf(pooled_gold, pooled_pred, labels_for(source));
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::string format_cells(const std::vector<ExperimentCell>& cells) {
    std::ostringstream out;
    out << "iter  algo  source     P-Micro  P-Macro  R-Micro  R-Macro  F-Micro  F-Macro\n";
    out.precision(4);
    out << std::fixed;
    for (const auto& cell : cells) {
        out << "  " << cell.iteration << "   " << ml::algorithm_to_string(cell.algorithm) << "  ";
        out.width(4);
        out << "" << to_string(cell.source) << (cell.source == Source::Textual ? "   " : " ")
            << "  " << cell.report.p_micro << "   " << cell.report.p_macro << "   "
            << cell.report.r_micro << "   " << cell.report.r_macro << "   " << cell.report.f_micro
            << "   " << cell.report.f_macro << "\n";
    }
    return out.str();
}

void write_cells_csv(const std::string& path, const std::vector<ExperimentCell>& cells) {
    std::string out = "iteration,algorithm,source,p_micro,p_macro,r_micro,r_macro,f_micro,f_macro\n";
    for (const auto& cell : cells) {
        std::ostringstream row;
        row.precision(17);
        row << cell.iteration << "," << ml::algorithm_to_string(cell.algorithm) << ","
            << to_string(cell.source) << "," << cell.report.p_micro << "," << cell.report.p_macro
            << "," << cell.report.r_micro << "," << cell.report.r_macro << ","
            << cell.report.f_micro << "," << cell.report.f_macro << "\n";
        out += row.str();
    }
    csv::write_text_file(path, out);
}

ExperimentData prepare_experiment_data(const CorpusPaths& paths) {
    ExperimentData data;
    data.notes = split_master(load_corpus(paths.corpus), paths.sentinel);
    deabbreviate_notes(data.notes, load_abbreviation_rules(paths.abbrev));

    const SectionDict dict = load_section_dict(paths.sections);
    for (const auto& entry : dict) {
        if (entry.heading == paths.family_history_heading) {
            data.family_history_section_id = entry.section_concept_id;
        }
    }
    const LexiconExtractor extractor(load_lexicon(paths.lexicon));
    for (const auto& note : data.notes) {
        data.spans_by_note[note.note_id] = detect_sections(note, dict);
        const auto anns = extractor.extract(note, data.spans_by_note.at(note.note_id));
        data.annotations.insert(data.annotations.end(), anns.begin(), anns.end());
    }
    const DiseaseRuleSets rulesets = load_rules_dir(paths.rules_dir);
    for (const auto& rules : rulesets) data.diseases.push_back(rules.disease);
    for (const auto& note : data.notes) {
        for (const auto& rules : rulesets) {
            data.rule_labels.push_back(cascade_match(note, rules).label);
        }
    }
    if (!paths.gold.empty()) data.gold = read_judgment_csv(paths.gold);
    return data;
}

std::map<std::int64_t, bool> read_split_csv(const std::string& path) {
    std::map<std::int64_t, bool> split;
    const auto rows = csv::read_file(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 2) throw Error("split csv: expected 2 fields at row " + std::to_string(i));
        if (r[1] != "train" && r[1] != "test") {
            throw Error("split csv: partition must be train or test, got " + r[1]);
        }
        split[std::stoll(r[0])] = r[1] == "test";
    }
    return split;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    const json doc = json::parse(csv::read_text_file(path));
    PipelineConfig config;
    config.corpus = doc.at("corpus").get<std::string>();
    config.gold = doc.value("gold", std::string{});
    config.abbrev = doc.at("abbrev").get<std::string>();
    config.sections = doc.at("sections").get<std::string>();
    config.lexicon = doc.at("lexicon").get<std::string>();
    config.rules_dir = doc.at("rules_dir").get<std::string>();
    config.out_dir = doc.at("out_dir").get<std::string>();
    config.sentinel = doc.value("sentinel", config.sentinel);
    config.family_history_heading =
        doc.value("family_history_heading", config.family_history_heading);
    config.algorithm = ml::algorithm_from_string(doc.value("algorithm", std::string("dt")));
    config.iteration = doc.value("iteration", std::string("e")).at(0);
    if (doc.contains("sources")) {
        config.sources.clear();
        for (const auto& s : doc.at("sources")) {
            config.sources.push_back(source_from_string(s.get<std::string>()));
        }
    }
    config.test_fraction = doc.value("test_fraction", config.test_fraction);
    config.folds = doc.value("folds", config.folds);
    config.seed = doc.value("seed", config.seed);
    config.nlp_system = doc.value("nlp_system", config.nlp_system);
    config.nlp_date_time = doc.value("nlp_date_time", config.nlp_date_time);
    return config;
}

PipelineOutcome run_pipeline(const PipelineConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const std::string out = config.out_dir;

    // ingest
    Notes notes = split_master(load_corpus(config.corpus), config.sentinel);
    deabbreviate_notes(notes, load_abbreviation_rules(config.abbrev));
    fs::create_directories(out + "/notes");
    for (const auto& note : notes) {
        csv::write_text_file(out + "/notes/" + std::to_string(note.note_id) + ".txt", note.text);
    }

    // sections
    const SectionDict dict = load_section_dict(config.sections);
    std::int64_t family_history_id = -1;
    for (const auto& entry : dict) {
        if (entry.heading == config.family_history_heading) {
            family_history_id = entry.section_concept_id;
        }
    }
    ExperimentData data;
    SectionSpans all_spans;
    for (const auto& note : notes) {
        SectionSpans spans = detect_sections(note, dict);
        all_spans.insert(all_spans.end(), spans.begin(), spans.end());
        data.spans_by_note[note.note_id] = std::move(spans);
    }
    write_section_csv(out + "/sections.csv", all_spans);

    // concepts
    const LexiconExtractor extractor(load_lexicon(config.lexicon));
    for (const auto& note : notes) {
        const auto anns = extractor.extract(note, data.spans_by_note.at(note.note_id));
        data.annotations.insert(data.annotations.end(), anns.begin(), anns.end());
    }
    write_annotation_csv(out + "/annotations.csv", data.annotations);

    // regex cascade
    const DiseaseRuleSets rulesets = load_rules_dir(config.rules_dir);
    RegexMatchRecords all_matches;
    for (const auto& note : notes) {
        for (const auto& rules : rulesets) {
            auto result = cascade_match(note, rules);
            all_matches.insert(all_matches.end(), result.records.begin(), result.records.end());
            data.rule_labels.push_back(result.label);
        }
    }
    write_match_csv(out + "/matches.csv", all_matches);
    write_rule_label_csv(out + "/rule_labels.csv", data.rule_labels);

    // persist everything into the CDM store and export it
    {
        const std::string db_path = out + "/annotations.db";
        std::error_code ec;
        fs::remove(db_path, ec);
        Store store(db_path);
        for (const auto& note : notes) store.persist_note(note);
        for (const auto& ann : data.annotations) {
            store.persist_concept(ann, config.nlp_system, config.nlp_date_time);
        }
        for (const auto& rec : all_matches) {
            store.persist_regex_match(rec, data.spans_by_note.at(rec.note_id), config.nlp_system,
                                      config.nlp_date_time);
        }
        store.export_csv(out + "/cdm");
    }

    PipelineOutcome outcome;
    outcome.note_count = notes.size();
    if (config.gold.empty()) return outcome; // annotation-only run

    // rule-path recovery against gold, over every (note, disease) pair
    data.gold = read_judgment_csv(config.gold);
    data.notes = std::move(notes);
    for (const auto& rules : rulesets) data.diseases.push_back(rules.disease);
    data.family_history_section_id = family_history_id;
    {
        std::map<std::pair<std::int64_t, std::string>, Label> rule_by_key;
        for (const auto& rl : data.rule_labels) rule_by_key[{rl.note_id, rl.disease}] = rl.label;
        long hits_textual = 0, total_textual = 0, hits_intuitive = 0, total_intuitive = 0;
        for (const auto& j : data.gold) {
            const auto it = rule_by_key.find({j.note_id, j.disease});
            if (it == rule_by_key.end()) continue;
            if (j.source == Source::Textual) {
                ++total_textual;
                hits_textual += it->second == j.label;
            } else {
                ++total_intuitive;
                hits_intuitive += to_intuitive(it->second) == j.label;
            }
        }
        outcome.rule_recovery_textual =
            total_textual ? static_cast<double>(hits_textual) / total_textual : 0.0;
        outcome.rule_recovery_intuitive =
            total_intuitive ? static_cast<double>(hits_intuitive) / total_intuitive : 0.0;
    }

    // hybrid (or all-class) classification for the configured iteration
    ExperimentOptions options;
    options.iterations = std::string(1, config.iteration);
    options.algorithms = {config.algorithm};
    options.sources = config.sources;
    options.test_fraction = config.test_fraction;
    options.folds = config.folds;
    options.seed = config.seed;
    const auto cells = run_iterations(data, options);
    write_cells_csv(out + "/metrics.csv", cells);
    for (const auto& cell : cells) outcome.hybrid_metrics[cell.source] = cell.report;

    json summary;
    summary["notes"] = outcome.note_count;
    summary["rule_recovery_textual"] = outcome.rule_recovery_textual;
    summary["rule_recovery_intuitive"] = outcome.rule_recovery_intuitive;
    for (const auto& [source, report] : outcome.hybrid_metrics) {
        summary["metrics"][std::string(to_string(source))] = {
            {"p_micro", report.p_micro}, {"p_macro", report.p_macro},
            {"r_micro", report.r_micro}, {"r_macro", report.r_macro},
            {"f_micro", report.f_micro}, {"f_macro", report.f_macro}};
    }
    summary["iteration"] = std::string(1, config.iteration);
    summary["algorithm"] = ml::algorithm_to_string(config.algorithm);
    csv::write_text_file(out + "/summary.json", summary.dump(2));
    return outcome;
}

} // namespace phenopipe
