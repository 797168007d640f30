#pragma once

#include <set>
#include <vector>

#include "phenopipe/labels.hpp"
#include "phenopipe/ml/classifier.hpp"
#include "phenopipe/rules.hpp"

namespace phenopipe {

/// Minor classes are the labels the paper-style protocol leaves to the
/// rule cascade: too few samples to train on. Everything else is major.
const std::set<Label>& minor_classes(Source source);
bool is_major(Label label, Source source);

/// Rule-label lookup for one disease, keyed by note id.
using RuleLabelIndex = std::map<std::int64_t, Label>;
RuleLabelIndex index_rule_labels(const RuleLabels& labels, const std::string& disease,
                                 Source source);

/// Mixed strategy for one disease: a (note, disease) whose cascade label is
/// minor keeps that label; major ones take the model's prediction. The
/// model must have been trained on major-class records only.
Judgments hybrid_classify(const std::vector<std::int64_t>& note_ids,
                          const RuleLabelIndex& rule_labels, const ml::Model& model,
                          const ml::FeatureMatrix& features, const std::string& disease,
                          Source source);

} // namespace phenopipe
