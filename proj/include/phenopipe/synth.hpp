#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phenopipe/labels.hpp"

namespace phenopipe {

/// Generator description of one disease: how it can be mentioned so the
/// bundled rule set recovers it, and how a "noisy" mention evades the
/// rules while staying visible to the lexicon extractor.
struct SynthDisease {
    std::string name;
    std::vector<std::string> surfaces; // rule-recoverable mention forms
    std::string abbrev;                // optional short form, expanded at ingest
    std::string noisy_surface;         // lexicon-only synonym; rules miss it
    std::string treatment;             // drug/procedure correlated with Present
};

struct SynthSpec {
    std::vector<SynthDisease> diseases;
    int notes = 100;
    double noise_rate = 0.0;
    double w_present = 0.25;
    double w_absent = 0.12;
    double w_questionable = 0.08;
    double w_unmentioned = 0.55;
    double family_history_rate = 0.30;
    double abbrev_rate = 0.25;
    double treatment_rate = 0.60;
    std::vector<std::string> distractors;

    static SynthSpec from_json(const std::string& text);
    static SynthSpec load(const std::string& path);
    std::string to_json() const;
};

struct SynthResult {
    std::string master_text; // sentinel-delimited records
    Judgments gold;          // both sources, in note order
};

/// Deterministic corpus: same spec and seed give byte-identical text and
/// gold labels. With noise_rate 0 every planted non-Unmentioned status is
/// recoverable by the bundled rule cascade after abbreviation expansion.
SynthResult generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed);

} // namespace phenopipe
