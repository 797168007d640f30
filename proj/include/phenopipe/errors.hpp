#pragma once

#include <stdexcept>
#include <string>

namespace phenopipe {

/// Base class for all pipeline errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ingest
struct EmptyCorpus : Error { using Error::Error; };
struct InvalidEncoding : Error { using Error::Error; };

// sections
struct DuplicateHeadingAtSameOffset : Error { using Error::Error; };
struct OffsetOutOfRange : Error { using Error::Error; };

// rules
struct SpanOutOfRange : Error { using Error::Error; };
struct BadRuleFile : Error { using Error::Error; };

// store
struct DuplicateNoteId : Error { using Error::Error; };
struct MissingNote : Error { using Error::Error; };
struct OffsetBeyondNote : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

// ml
struct DegenerateLabels : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct VocabularyMismatch : Error { using Error::Error; };

// harness
struct KeyMismatch : Error { using Error::Error; };
struct MissingRuleLabel : Error { using Error::Error; };

struct BadConfig : Error { using Error::Error; };

} // namespace phenopipe
