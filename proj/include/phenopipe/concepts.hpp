#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phenopipe/note.hpp"
#include "phenopipe/sections.hpp"

namespace phenopipe {

struct LexiconEntry {
    std::string surface;       // lowercase phrase
    std::string cui;           // C + 7 digits
    std::string semantic_type; // e.g. T047
};

using Lexicon = std::vector<LexiconEntry>;

struct ConceptAnnotation {
    std::int64_t note_id = 0;
    std::string cui;
    std::string semantic_type;
    std::string lexical_variant; // exact slice note.text[start, end)
    std::size_t start = 0;
    std::size_t end = 0; // exclusive
    std::int64_t section_concept_id = 0;
};

using ConceptAnnotations = std::vector<ConceptAnnotation>;

struct SemanticTypeFilter {
    std::set<std::string> allowed;
};

/// A concept extractor maps one note (with its section spans) to
/// annotations. The lexicon matcher below is the bundled implementation;
/// institutions can plug a different engine behind the same signature.
class ConceptExtractor {
public:
    virtual ~ConceptExtractor() = default;
    virtual ConceptAnnotations extract(const Note& note, const SectionSpans& spans) const = 0;
};

/// Deterministic greedy leftmost-longest, case-insensitive,
/// token-boundary-aligned dictionary matcher.
class LexiconExtractor final : public ConceptExtractor {
public:
    explicit LexiconExtractor(Lexicon lexicon);
    ConceptAnnotations extract(const Note& note, const SectionSpans& spans) const override;
    const Lexicon& lexicon() const { return lexicon_; }

private:
    Lexicon lexicon_;
    // surfaces bucketed by first byte, longest first
    std::vector<std::vector<const LexiconEntry*>> buckets_;
};

ConceptAnnotations extract_concepts(const Note& note, const Lexicon& lexicon,
                                    const SectionSpans& spans);

ConceptAnnotations filter_by_semantic_types(const ConceptAnnotations& anns,
                                            const SemanticTypeFilter& filter);

ConceptAnnotations drop_section(const ConceptAnnotations& anns, std::int64_t section_concept_id);

/// Lexicon file: CSV `surface,cui,semantic_type` (header optional).
Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon(std::string_view content);

/// CSV `note_id,cui,semantic_type,lexical_variant,start,end,section_concept_id`.
void write_annotation_csv(const std::string& path, const ConceptAnnotations& anns);
ConceptAnnotations read_annotation_csv(const std::string& path);

/// Table of the fifteen semantic-type codes used for the clinically
/// focused feature restriction.
const std::set<std::string>& clinical_semantic_types();

} // namespace phenopipe
