#include "phenopipe/hybrid.hpp"

#include "phenopipe/errors.hpp"

namespace phenopipe {

const std::set<Label>& minor_classes(Source source) {
    static const std::set<Label> kIntuitive = {Label::Questionable};
    static const std::set<Label> kTextual = {Label::Questionable, Label::Absent};
    return source == Source::Intuitive ? kIntuitive : kTextual;
}

bool is_major(Label label, Source source) {
    return minor_classes(source).count(label) == 0;
}

RuleLabelIndex index_rule_labels(const RuleLabels& labels, const std::string& disease,
                                 Source source) {
    RuleLabelIndex index;
    for (const auto& rl : labels) {
        if (rl.disease != disease) continue;
        const Label label = source == Source::Intuitive ? to_intuitive(rl.label) : rl.label;
        index[rl.note_id] = label;
    }
    return index;
}

Judgments hybrid_classify(const std::vector<std::int64_t>& note_ids,
                          const RuleLabelIndex& rule_labels, const ml::Model& model,
                          const ml::FeatureMatrix& features, const std::string& disease,
                          Source source) {
    if (features.row_ids != note_ids) {
        throw ShapeMismatch("hybrid_classify: feature rows must match note_ids");
    }
    const auto ml_predictions = model.predict(features);
    Judgments out;
    out.reserve(note_ids.size());
    for (std::size_t i = 0; i < note_ids.size(); ++i) {
        const auto it = rule_labels.find(note_ids[i]);
        if (it == rule_labels.end()) {
            throw MissingRuleLabel("hybrid_classify: no rule label for note " +
                                   std::to_string(note_ids[i]) + ", " + disease);
        }
        Judgment j;
        j.note_id = note_ids[i];
        j.disease = disease;
        j.source = source;
        j.label = is_major(it->second, source) ? label_from_string(ml_predictions[i]) : it->second;
        out.push_back(std::move(j));
    }
    return out;
}

} // namespace phenopipe
