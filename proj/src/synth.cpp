#include "phenopipe/synth.hpp"

#include <nlohmann/json.hpp>

#include "phenopipe/csv.hpp"
#include "phenopipe/errors.hpp"
#include "phenopipe/ingest.hpp"
#include "phenopipe/rng.hpp"

namespace phenopipe {

using nlohmann::json;

SynthSpec SynthSpec::from_json(const std::string& text) {
    const json doc = json::parse(text);
    SynthSpec spec;
    spec.notes = doc.value("notes", 100);
    spec.noise_rate = doc.value("noise_rate", 0.0);
    if (doc.contains("status_weights")) {
        const json& w = doc.at("status_weights");
        spec.w_present = w.value("present", spec.w_present);
        spec.w_absent = w.value("absent", spec.w_absent);
        spec.w_questionable = w.value("questionable", spec.w_questionable);
        spec.w_unmentioned = w.value("unmentioned", spec.w_unmentioned);
    }
    spec.family_history_rate = doc.value("family_history_rate", spec.family_history_rate);
    spec.abbrev_rate = doc.value("abbrev_rate", spec.abbrev_rate);
    spec.treatment_rate = doc.value("treatment_rate", spec.treatment_rate);
    if (doc.contains("distractors")) {
        spec.distractors = doc.at("distractors").get<std::vector<std::string>>();
    }
    for (const auto& d : doc.at("diseases")) {
        SynthDisease disease;
        disease.name = d.at("name").get<std::string>();
        disease.surfaces = d.at("surfaces").get<std::vector<std::string>>();
        disease.abbrev = d.value("abbrev", std::string{});
        disease.noisy_surface = d.value("noisy", std::string{});
        disease.treatment = d.value("treatment", std::string{});
        if (disease.surfaces.empty()) {
            throw BadConfig("synth spec: disease " + disease.name + " needs at least one surface");
        }
        spec.diseases.push_back(std::move(disease));
    }
    if (spec.diseases.empty()) throw BadConfig("synth spec: no diseases");
    if (spec.notes < 1) throw BadConfig("synth spec: notes must be positive");
    return spec;
}

SynthSpec SynthSpec::load(const std::string& path) {
    return from_json(csv::read_text_file(path));
}

std::string SynthSpec::to_json() const {
    json doc;
    doc["notes"] = notes;
    doc["noise_rate"] = noise_rate;
    doc["status_weights"] = {{"present", w_present}, {"absent", w_absent},
                             {"questionable", w_questionable}, {"unmentioned", w_unmentioned}};
    doc["family_history_rate"] = family_history_rate;
    doc["abbrev_rate"] = abbrev_rate;
    doc["treatment_rate"] = treatment_rate;
    doc["distractors"] = distractors;
    doc["diseases"] = json::array();
    for (const auto& d : diseases) {
        doc["diseases"].push_back({{"name", d.name}, {"surfaces", d.surfaces},
                                   {"abbrev", d.abbrev}, {"noisy", d.noisy_surface},
                                   {"treatment", d.treatment}});
    }
    return doc.dump(2);
}

namespace {

const char* kPresentTemplates[] = {
    "The patient has %s.",
    "%s was noted on admission.",
    "Assessment significant for %s.",
};
const char* kAbsentTemplates[] = {
    "No evidence of %s.",
    "The patient denies %s.",
    "Negative for %s.",
    "%s was ruled out.",
};
const char* kQuestionableTemplates[] = {
    "Possible %s.",
    "Rule out %s.",
    "The patient may have %s.",
    "Questionable %s.",
};
const char* kFamilyTemplates[] = {
    "Mother had %s.",
    "Father was treated for %s.",
    "Family history of %s.",
};
const char* kTreatmentTemplates[] = {
    "Started on %s.",
    "Continues %s as prescribed.",
};
const char* kDistractorTemplates[] = {
    "Notable for %s.",
    "%s reviewed and stable.",
    "%s within normal limits.",
};

std::string fill(const char* tmpl, const std::string& term) {
    std::string out(tmpl);
    const std::size_t pos = out.find("%s");
    out.replace(pos, 2, term);
    if (!term.empty() && out.rfind(term, 0) == 0) {
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    }
    return out;
}

template <std::size_t N>
const char* pick(const char* (&pool)[N], Rng& rng) {
    return pool[rng.uniform(N)];
}

Label sample_status(const SynthSpec& spec, Rng& rng) {
    const double total = spec.w_present + spec.w_absent + spec.w_questionable + spec.w_unmentioned;
    double v = rng.uniform_real() * total;
    if ((v -= spec.w_present) < 0) return Label::Present;
    if ((v -= spec.w_absent) < 0) return Label::Absent;
    if ((v -= spec.w_questionable) < 0) return Label::Questionable;
    return Label::Unmentioned;
}

} // namespace

SynthResult generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed) {
    SynthResult result;
    Rng root(seed);

    for (int n = 1; n <= spec.notes; ++n) {
        Rng rng = root.spawn(static_cast<std::uint64_t>(n));
        std::string history_of_present_illness;
        std::string past_medical_history;
        std::string family_history;
        std::string medications;
        std::string assessment;

        for (std::size_t d = 0; d < spec.diseases.size(); ++d) {
            const SynthDisease& disease = spec.diseases[d];
            const Label status = sample_status(spec, rng);

            result.gold.push_back({n, disease.name, Source::Textual, status});
            result.gold.push_back({n, disease.name, Source::Intuitive, to_intuitive(status)});

            if (status == Label::Unmentioned) continue;

            const bool noisy = !disease.noisy_surface.empty() && rng.bernoulli(spec.noise_rate);
            std::string mention;
            if (noisy) {
                mention = disease.noisy_surface;
            } else if (!disease.abbrev.empty() && rng.bernoulli(spec.abbrev_rate)) {
                mention = disease.abbrev;
            } else {
                mention = disease.surfaces[rng.uniform(disease.surfaces.size())];
            }

            std::string sentence;
            switch (status) {
            case Label::Present: sentence = fill(pick(kPresentTemplates, rng), mention); break;
            case Label::Absent: sentence = fill(pick(kAbsentTemplates, rng), mention); break;
            case Label::Questionable:
                sentence = fill(pick(kQuestionableTemplates, rng), mention);
                break;
            case Label::Unmentioned: break;
            }
            switch (rng.uniform(3)) {
            case 0: history_of_present_illness += sentence + "\n"; break;
            case 1: past_medical_history += sentence + "\n"; break;
            default: assessment += sentence + "\n"; break;
            }

            // family-history traps only for recoverable non-U plants: the
            // extra Present-pass mention never outranks the planted label
            if (!noisy && rng.bernoulli(spec.family_history_rate)) {
                family_history +=
                    fill(pick(kFamilyTemplates, rng), disease.surfaces[0]) + "\n";
            }
            if (!disease.treatment.empty()) {
                const bool treated = status == Label::Present
                                         ? rng.bernoulli(spec.treatment_rate)
                                         : rng.bernoulli(spec.treatment_rate * 0.15);
                if (treated) {
                    medications += fill(pick(kTreatmentTemplates, rng), disease.treatment) + "\n";
                }
            }
        }

        std::string record = "RECORD #" + std::to_string(n) + "\n";
        record += "CHIEF COMPLAINT:\n";
        if (!spec.distractors.empty()) {
            record += fill(pick(kDistractorTemplates, rng),
                           spec.distractors[rng.uniform(spec.distractors.size())]) + "\n";
        } else {
            record += "Follow-up visit.\n";
        }
        record += "HISTORY OF PRESENT ILLNESS:\n";
        record += history_of_present_illness.empty() ? "Stable course.\n" : history_of_present_illness;
        record += "PAST MEDICAL HISTORY:\n";
        record += past_medical_history.empty() ? "Unremarkable.\n" : past_medical_history;
        record += "FAMILY HISTORY:\n";
        record += family_history.empty() ? "Noncontributory.\n" : family_history;
        record += "MEDICATIONS:\n";
        record += medications.empty() ? "None.\n" : medications;
        if (!spec.distractors.empty() && rng.bernoulli(0.7)) {
            record += "LABORATORY DATA:\n";
            const std::size_t k = 1 + rng.uniform(3);
            for (std::size_t i = 0; i < k; ++i) {
                record += fill(pick(kDistractorTemplates, rng),
                               spec.distractors[rng.uniform(spec.distractors.size())]) + "\n";
            }
        }
        record += "HOSPITAL COURSE:\n";
        record += assessment.empty() ? "Uneventful stay.\n" : assessment;
        if (!spec.distractors.empty() && rng.bernoulli(0.5)) {
            record += fill(pick(kDistractorTemplates, rng),
                           spec.distractors[rng.uniform(spec.distractors.size())]) + "\n";
        }

        result.master_text += record;
        result.master_text += kDefaultSentinel;
        result.master_text += "\n";
    }
    return result;
}

} // namespace phenopipe
