#pragma once

#include <map>
#include <string>
#include <vector>

#include "phenopipe/labels.hpp"

namespace phenopipe {

/// Micro/macro precision, recall and F over a multi-class confusion
/// matrix. Macro is the unweighted mean of per-class scores over the full
/// label set (a class absent from gold and pred contributes zeros); 0/0
/// is defined as 0 throughout.
struct MetricsReport {
    double p_micro = 0, r_micro = 0, f_micro = 0;
    double p_macro = 0, r_macro = 0, f_macro = 0;

    struct PerClass {
        Label label = Label::Unmentioned;
        long tp = 0, fp = 0, fn = 0;
        long support = 0; // gold count
        double precision = 0, recall = 0, f1 = 0;
    };
    std::vector<PerClass> per_class;
};

/// gold and pred must cover the same (note_id, disease) keys exactly once
/// each; both sides are matched by key, not by position.
MetricsReport micro_macro_prf(const Judgments& gold, const Judgments& pred,
                              const std::vector<Label>& label_set);

/// The conventional label sets per judgment source.
const std::vector<Label>& labels_for(Source source);

std::string format_report(const MetricsReport& report);

} // namespace phenopipe
