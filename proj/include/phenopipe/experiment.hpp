#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phenopipe/concepts.hpp"
#include "phenopipe/ingest.hpp"
#include "phenopipe/labels.hpp"
#include "phenopipe/metrics.hpp"
#include "phenopipe/ml/classifier.hpp"
#include "phenopipe/ml/grid.hpp"
#include "phenopipe/note.hpp"
#include "phenopipe/rules.hpp"
#include "phenopipe/sections.hpp"

namespace phenopipe {

/// The six tuning iterations: a/b/c classify all classes, d/e/f restrict
/// machine learning to the major classes (rules fill in the minors).
/// b/e drop the family-history section features, c/f additionally restrict
/// features to the clinically relevant semantic types.
struct IterationSpec {
    char letter = 'a';
    bool drop_family_history = false;
    bool semantic_filter = false;
    bool major_only = false;
};

IterationSpec iteration_spec(char letter);
const std::vector<IterationSpec>& all_iterations();

/// Everything run_iterations needs, already parsed and cascaded.
struct ExperimentData {
    Notes notes;
    std::map<std::int64_t, SectionSpans> spans_by_note;
    ConceptAnnotations annotations;
    RuleLabels rule_labels;
    Judgments gold;
    std::vector<std::string> diseases;
    std::int64_t family_history_section_id = -1;

    std::vector<std::int64_t> note_ids() const;
};

struct ExperimentOptions {
    std::string iterations = "abcdef";
    std::vector<ml::Algorithm> algorithms = {ml::Algorithm::LR, ml::Algorithm::SVM,
                                             ml::Algorithm::DT, ml::Algorithm::RF};
    std::vector<Source> sources = {Source::Intuitive, Source::Textual};
    double test_fraction = 0.3;
    int folds = 3;
    std::uint64_t seed = 42;
    /// Optional fixed note-level split (note_id -> true when test); when
    /// absent each (disease, source) task gets a seeded stratified split.
    std::optional<std::map<std::int64_t, bool>> fixed_split;
};

struct ExperimentCell {
    char iteration = 'a';
    ml::Algorithm algorithm = ml::Algorithm::DT;
    Source source = Source::Textual;
    MetricsReport report;
};

std::vector<ExperimentCell> run_iterations(const ExperimentData& data,
                                           const ExperimentOptions& options);

/// Feature-stage view of the annotations for one iteration (shared by the
/// experiment runner and its tests).
ConceptAnnotations iteration_features(const ConceptAnnotations& annotations,
                                      const IterationSpec& spec,
                                      std::int64_t family_history_section_id);

std::string format_cells(const std::vector<ExperimentCell>& cells);
void write_cells_csv(const std::string& path, const std::vector<ExperimentCell>& cells);

/// Input locations for corpus preparation (shared by the experiment and
/// pipeline drivers).
struct CorpusPaths {
    std::string corpus;
    std::string gold;
    std::string abbrev;
    std::string sections;
    std::string lexicon;
    std::string rules_dir;
    std::string sentinel = std::string(kDefaultSentinel);
    std::string family_history_heading = "FAMILY HISTORY";
};

/// Ingests, sectionizes, extracts and cascades a corpus into the form
/// run_iterations consumes.
ExperimentData prepare_experiment_data(const CorpusPaths& paths);

/// Split file: CSV `note_id,partition` with partition train|test.
std::map<std::int64_t, bool> read_split_csv(const std::string& path);

/// End-to-end configuration (ingest through evaluation), JSON-backed.
struct PipelineConfig {
    std::string corpus;
    std::string gold;
    std::string abbrev;
    std::string sections;
    std::string lexicon;
    std::string rules_dir;
    std::string out_dir;
    std::string sentinel = std::string(kDefaultSentinel);
    std::string family_history_heading = "FAMILY HISTORY";
    ml::Algorithm algorithm = ml::Algorithm::DT;
    char iteration = 'e';
    std::vector<Source> sources = {Source::Intuitive, Source::Textual};
    double test_fraction = 0.3;
    int folds = 3;
    std::uint64_t seed = 42;
    std::string nlp_system = "phenopipe 1.0";
    std::string nlp_date_time = "1970-01-01T00:00:00Z";

    static PipelineConfig load(const std::string& path);
};

struct PipelineOutcome {
    std::size_t note_count = 0;
    /// Fraction of (note, disease) pairs whose cascade label equals gold.
    double rule_recovery_textual = 0.0;
    double rule_recovery_intuitive = 0.0;
    std::map<Source, MetricsReport> hybrid_metrics; // on the test split
};

/// Runs ingest -> sectionize -> extract -> annotate -> load -> train ->
/// evaluate, writing artifacts and summary.json under config.out_dir.
PipelineOutcome run_pipeline(const PipelineConfig& config);

} // namespace phenopipe
