#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// must stay brute-force and separate from the implementation paths they
// check.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "phenopipe/labels.hpp"
#include "phenopipe/metrics.hpp"
#include "phenopipe/rng.hpp"
#include "phenopipe/sections.hpp"

namespace test_helpers {

using phenopipe::Label;
using phenopipe::Rng;

inline std::string random_word(Rng& rng, std::size_t min_len = 2, std::size_t max_len = 8) {
    const std::size_t len = min_len + rng.uniform(max_len - min_len + 1);
    std::string word;
    for (std::size_t i = 0; i < len; ++i) {
        word.push_back(static_cast<char>('a' + rng.uniform(26)));
    }
    return word;
}

inline std::string random_text(Rng& rng, std::size_t words) {
    static const char* separators[] = {" ", " ", " ", ". ", ", ", "\n", "; "};
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        if (i) text += separators[rng.uniform(7)];
        text += random_word(rng);
    }
    return text;
}

/// Naive left-to-right scan-and-replace of a literal needle (no regex);
/// the oracle for single-literal deabbreviation rules.
inline std::string scan_and_replace(const std::string& text, const std::string& needle,
                                    const std::string& replacement) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text.compare(pos, needle.size(), needle) == 0) {
            out += replacement;
            pos += needle.size();
        } else {
            out.push_back(text[pos++]);
        }
    }
    return out;
}

/// Brute-force confusion-matrix metrics, written independently of
/// phenopipe::micro_macro_prf: plain positional label vectors, no keying.
struct OracleMetrics {
    double p_micro, r_micro, f_micro, p_macro, r_macro, f_macro;
};

inline OracleMetrics oracle_prf(const std::vector<Label>& gold, const std::vector<Label>& pred,
                                const std::vector<Label>& label_set) {
    auto f_of = [](double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); };
    double p_sum = 0, r_sum = 0, f_sum = 0;
    long tp_all = 0, fp_all = 0, fn_all = 0;
    for (Label c : label_set) {
        long tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (gold[i] == c && pred[i] == c) ++tp;
            if (gold[i] != c && pred[i] == c) ++fp;
            if (gold[i] == c && pred[i] != c) ++fn;
        }
        const double p = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
        const double r = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
        p_sum += p;
        r_sum += r;
        f_sum += f_of(p, r);
        tp_all += tp;
        fp_all += fp;
        fn_all += fn;
    }
    OracleMetrics m{};
    m.p_micro = tp_all + fp_all == 0 ? 0.0 : double(tp_all) / double(tp_all + fp_all);
    m.r_micro = tp_all + fn_all == 0 ? 0.0 : double(tp_all) / double(tp_all + fn_all);
    m.f_micro = f_of(m.p_micro, m.r_micro);
    const double k = static_cast<double>(label_set.size());
    m.p_macro = p_sum / k;
    m.r_macro = r_sum / k;
    m.f_macro = f_sum / k;
    return m;
}

/// Linear-scan containment oracle over inclusive section spans.
inline std::int64_t oracle_section_of(std::size_t offset, const phenopipe::SectionSpans& spans) {
    for (const auto& s : spans) {
        if (offset >= s.start && offset <= s.end) return s.section_concept_id;
    }
    return -1;
}

inline phenopipe::Judgments to_judgments(const std::vector<Label>& labels,
                                         phenopipe::Source source) {
    phenopipe::Judgments out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out.push_back({static_cast<std::int64_t>(i + 1), "d", source, labels[i]});
    }
    return out;
}

} // namespace test_helpers
