// Sequence tagger over BIO tags for STAGE/GRADE/EXTENT: a whitespace +
// punctuation-peeling tokenizer that keeps offsets, span<->tag conversion,
// and an averaged perceptron trained on the weak-label dataset.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "perio/types.hpp"

namespace perio {

struct Token {
    std::string surface;
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Token&) const = default;
};

// Splits on whitespace, then peels leading/trailing punctuation characters
// into their own tokens. Every non-whitespace character ends up covered.
std::vector<Token> tokenize(const std::string& text);

inline constexpr int kNumTags = 7;

// O first, then alphabetical; score ties resolve to the earliest index.
const std::array<std::string, kNumTags>& tag_names();
int tag_index(const std::string& name);

// BIO tags aligned to tokenize(sentence.text). A span that crosses a token
// boundary is an alignment error.
std::vector<int> spans_to_tags(const AnnotatedSentence& sentence);

// Inverse direction with BIO repair: an I-X with no live X span to its left
// is promoted to B-X.
std::vector<EntitySpan> tags_to_spans(const std::vector<Token>& tokens,
                                      const std::vector<int>& tags, const std::string& text);

struct TrainParams {
    int epochs = 10;
    std::uint64_t seed = 42;
};

struct TaggerModel {
    int format_version = 1;
    std::string feature_template = "v1";
    int epochs = 0;
    std::uint64_t seed = 0;
    std::vector<double> val_f1_history;  // one entry per epoch
    std::unordered_map<std::string, std::array<double, kNumTags>> weights;  // averaged
};

using EpochCallback = void (*)(int epoch, double val_f1, void* user);

TaggerModel train(const DatasetSplit& split, const TrainParams& params,
                  EpochCallback on_epoch = nullptr, void* user = nullptr);

std::vector<EntitySpan> predict(const TaggerModel& model, const std::string& text);

// Per-note prediction over every section; spans use note-text offsets.
// workers > 1 splits the notes across threads; output order is fixed.
std::map<std::string, std::vector<EntitySpan>> predict_notes(
    const TaggerModel& model, const std::vector<ClinicalNote>& notes, int workers = 1);

void save_model(const TaggerModel& model, const std::string& path);
TaggerModel load_model(const std::string& path);

// Prediction-interchange import; validates span bounds against the corpus
// and fills surfaces. Duplicate note_id lines concatenate.
std::map<std::string, std::vector<EntitySpan>> import_predictions(
    const std::string& path, const std::vector<ClinicalNote>& notes);

// Exact-match span F1 of predictions against reference spans (micro).
struct SpanPrf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};
SpanPrf span_prf(const std::vector<std::vector<EntitySpan>>& predicted,
                 const std::vector<std::vector<EntitySpan>>& reference);

}  // namespace perio
