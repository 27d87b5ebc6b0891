#include "perio/dataset.hpp"

#include <numeric>

#include "perio/extractor.hpp"
#include "perio/rng.hpp"

namespace perio {

namespace {

// Keyword span through value span as one section-relative entity span; falls
// back to the keyword alone when the value is empty.
EntitySpan keyword_value_span(SpanLabel label, const FieldSpan& kw, const FieldSpan& val,
                              const RawCapture& cap) {
    EntitySpan span;
    span.label = label;
    span.start = kw.start - cap.section_start;
    const std::size_t end = val.end > val.start ? val.end : kw.end;
    span.end = end - cap.section_start;
    span.surface = cap.section_text.substr(span.start, span.end - span.start);
    return span;
}

AnnotatedSentence sentence_from_capture(const RawCapture& cap) {
    AnnotatedSentence s;
    s.note_id = cap.note_id;
    s.text = cap.section_text;
    if (cap.extent_raw) {
        EntitySpan span;
        span.label = SpanLabel::Extent;
        span.start = cap.extent_raw->start - cap.section_start;
        span.end = cap.extent_raw->end - cap.section_start;
        span.surface = cap.extent_raw->text;
        s.spans.push_back(std::move(span));
    }
    if (cap.stage_kw && cap.stage_raw)
        s.spans.push_back(keyword_value_span(SpanLabel::Stage, *cap.stage_kw, *cap.stage_raw, cap));
    if (cap.grade_kw && cap.grade_raw)
        s.spans.push_back(keyword_value_span(SpanLabel::Grade, *cap.grade_kw, *cap.grade_raw, cap));
    return s;
}

}  // namespace

std::vector<AnnotatedSentence> sentences_from_captures(const std::vector<RawCapture>& captures) {
    std::vector<AnnotatedSentence> sentences;
    sentences.reserve(captures.size());
    for (const auto& cap : captures) sentences.push_back(sentence_from_capture(cap));
    return sentences;
}

std::vector<AnnotatedSentence> build_weak_dataset(const std::vector<ClinicalNote>& notes,
                                                  Method method) {
    std::vector<AnnotatedSentence> sentences;
    for (const auto& note : notes)
        for (const auto& cap : extract_note(note, method))
            sentences.push_back(sentence_from_capture(cap));
    return sentences;
}

SplitSizes split_sizes(std::size_t n) {
    SplitSizes sizes;
    sizes.train = n * 8 / 10;
    sizes.validation = n / 10;
    sizes.test = n - sizes.train - sizes.validation;
    return sizes;
}

DatasetSplit split_dataset(const std::vector<AnnotatedSentence>& sentences, std::uint64_t seed) {
    const std::size_t n = sentences.size();
    if (n < 3)
        throw Error(ErrorKind::Invalid,
                    "need at least 3 sentences to populate train/validation/test, got " +
                        std::to_string(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    const SplitSizes sizes = split_sizes(n);
    DatasetSplit split;
    split.seed = seed;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t idx = order[k];
        if (k < sizes.train) {
            split.train_indices.push_back(idx);
            split.train.push_back(sentences[idx]);
        } else if (k < sizes.train + sizes.validation) {
            split.validation_indices.push_back(idx);
            split.validation.push_back(sentences[idx]);
        } else {
            split.test_indices.push_back(idx);
            split.test.push_back(sentences[idx]);
        }
    }
    return split;
}

}  // namespace perio
