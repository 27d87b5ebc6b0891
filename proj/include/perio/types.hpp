// Core domain types shared across the periodontitis extraction pipeline.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace perio {

enum class ErrorKind { Io, Parse, Invalid, Domain, Bounds };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

enum class Source { Real, Synthetic };

// Unknown ranks lowest; enum order doubles as the severity rank within a field.
enum class Stage : int { Unknown = 0, I, II, III, IV };
enum class Grade : int { Unknown = 0, A, B, C };
enum class Extent : int { Unknown = 0, Localized, Generalized };

enum class Method { Simple, Advanced };

std::string to_string(Stage s);
std::string to_string(Grade g);
std::string to_string(Extent e);
std::string to_string(Method m);

struct ClinicalNote {
    std::string note_id;
    std::string text;
    Source source = Source::Real;
};

struct Diagnosis {
    Stage stage = Stage::Unknown;
    Grade grade = Grade::Unknown;
    Extent extent = Extent::Unknown;

    bool operator==(const Diagnosis&) const = default;
};

// Severity order: stage first, then extent, then grade.
int severity_compare(const Diagnosis& a, const Diagnosis& b);

enum class SpanLabel { Stage, Grade, Extent };

std::string to_string(SpanLabel l);
SpanLabel span_label_from_string(const std::string& s);

// Standoff span; offsets index the text it annotates (section or full note).
struct EntitySpan {
    SpanLabel label = SpanLabel::Stage;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string surface;

    bool operator==(const EntitySpan&) const = default;
};

struct GoldRecord {
    std::string note_id;
    std::optional<Diagnosis> diagnosis;  // nullopt = no periodontitis diagnosis
    std::vector<EntitySpan> spans;       // optional, note-text offsets
};

struct Section {
    std::string note_id;
    std::size_t start = 0;  // char offset into the note text
    std::size_t end = 0;    // exclusive
    std::string text;
};

struct FieldSpan {
    std::string text;
    std::size_t start = 0;  // note-text offsets
    std::size_t end = 0;
};

// One regex hit over a diagnosis section. Section text/bounds ride along so a
// capture dump is self-contained for dataset building.
struct RawCapture {
    std::string note_id;
    std::size_t section_start = 0;
    std::size_t section_end = 0;
    std::string section_text;
    Method method = Method::Simple;
    FieldSpan dx_marker;  // marker word plus separator, always present
    std::optional<FieldSpan> extent_raw;
    std::optional<FieldSpan> stage_kw;
    std::optional<FieldSpan> stage_raw;
    std::optional<FieldSpan> grade_kw;
    std::optional<FieldSpan> grade_raw;
    std::optional<FieldSpan> perio_token;
};

struct AnnotatedSentence {
    std::string note_id;
    std::string text;  // the diagnosis section text
    std::vector<EntitySpan> spans;

    bool operator==(const AnnotatedSentence&) const = default;
};

struct DatasetSplit {
    std::vector<AnnotatedSentence> train;
    std::vector<AnnotatedSentence> validation;
    std::vector<AnnotatedSentence> test;
    std::vector<std::size_t> train_indices;  // into the pre-shuffle sentence list
    std::vector<std::size_t> validation_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
};

struct SynthConfig {
    std::size_t n_notes = 0;
    std::uint64_t seed = 42;
    std::map<std::string, double> noise_rates;  // kind -> probability

    static const std::vector<std::string>& noise_kinds();
    static SynthConfig with_defaults(std::size_t n_notes, std::uint64_t seed);
    void validate() const;
};

using DiagnosisMap = std::map<std::string, std::optional<Diagnosis>>;

}  // namespace perio
