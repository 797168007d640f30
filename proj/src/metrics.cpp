#include "phenopipe/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "phenopipe/errors.hpp"

namespace phenopipe {

namespace {

double ratio(long num, long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f_score(double p, double r) {
    return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

} // namespace

MetricsReport micro_macro_prf(const Judgments& gold, const Judgments& pred,
                              const std::vector<Label>& label_set) {
    using Key = std::pair<std::int64_t, std::string>;
    std::map<Key, Label> gold_by_key;
    for (const auto& j : gold) {
        if (!gold_by_key.emplace(Key{j.note_id, j.disease}, j.label).second) {
            throw KeyMismatch("duplicate gold judgment for note " + std::to_string(j.note_id) +
                              ", " + j.disease);
        }
    }
    std::map<Key, Label> pred_by_key;
    for (const auto& j : pred) {
        if (!pred_by_key.emplace(Key{j.note_id, j.disease}, j.label).second) {
            throw KeyMismatch("duplicate predicted judgment for note " + std::to_string(j.note_id) +
                              ", " + j.disease);
        }
    }
    if (gold_by_key.size() != pred_by_key.size()) {
        throw KeyMismatch("gold has " + std::to_string(gold_by_key.size()) + " keys, pred has " +
                          std::to_string(pred_by_key.size()));
    }

    std::map<Label, MetricsReport::PerClass> tally;
    for (Label l : label_set) tally[l].label = l;
    long tp_total = 0, fp_total = 0, fn_total = 0;

    for (const auto& [key, gold_label] : gold_by_key) {
        const auto it = pred_by_key.find(key);
        if (it == pred_by_key.end()) {
            throw KeyMismatch("prediction missing for note " + std::to_string(key.first) + ", " +
                              key.second);
        }
        const Label pred_label = it->second;
        if (!tally.count(gold_label) || !tally.count(pred_label)) {
            throw KeyMismatch("label outside the evaluation label set");
        }
        ++tally[gold_label].support;
        if (gold_label == pred_label) {
            ++tally[gold_label].tp;
            ++tp_total;
        } else {
            ++tally[gold_label].fn;
            ++tally[pred_label].fp;
            ++fn_total;
            ++fp_total;
        }
    }

    MetricsReport report;
    double p_sum = 0, r_sum = 0, f_sum = 0;
    for (Label l : label_set) {
        auto& c = tally[l];
        c.precision = ratio(c.tp, c.tp + c.fp);
        c.recall = ratio(c.tp, c.tp + c.fn);
        c.f1 = f_score(c.precision, c.recall);
        p_sum += c.precision;
        r_sum += c.recall;
        f_sum += c.f1;
        report.per_class.push_back(c);
    }
    const auto k = static_cast<double>(label_set.size());
    report.p_macro = p_sum / k;
    report.r_macro = r_sum / k;
    report.f_macro = f_sum / k;
    report.p_micro = ratio(tp_total, tp_total + fp_total);
    report.r_micro = ratio(tp_total, tp_total + fn_total);
    report.f_micro = f_score(report.p_micro, report.r_micro);
    return report;
}

const std::vector<Label>& labels_for(Source source) {
    static const std::vector<Label> kIntuitive = {Label::Absent, Label::Present,
                                                  Label::Questionable};
    static const std::vector<Label> kTextual = {Label::Absent, Label::Present, Label::Questionable,
                                                Label::Unmentioned};
    return source == Source::Intuitive ? kIntuitive : kTextual;
}

std::string format_report(const MetricsReport& report) {
    std::ostringstream out;
    out.precision(4);
    out << std::fixed;
    out << "P-Micro " << report.p_micro << "  P-Macro " << report.p_macro << "  R-Micro "
        << report.r_micro << "  R-Macro " << report.r_macro << "  F-Micro " << report.f_micro
        << "  F-Macro " << report.f_macro << "\n";
    for (const auto& c : report.per_class) {
        out << "  " << to_string(c.label) << ": P " << c.precision << " R " << c.recall << " F "
            << c.f1 << " (support " << c.support << ")\n";
    }
    return out.str();
}

} // namespace phenopipe
