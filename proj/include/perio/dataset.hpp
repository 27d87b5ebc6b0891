// Weak-label dataset construction from filtered captures and the
// deterministic 8:1:1 split.
#pragma once

#include <vector>

#include "perio/types.hpp"

namespace perio {

// One annotated sentence per filtered capture. STAGE/GRADE spans cover the
// keyword plus its value; EXTENT covers the extent token. Offsets are
// relative to the section text.
std::vector<AnnotatedSentence> build_weak_dataset(const std::vector<ClinicalNote>& notes,
                                                  Method method);

// Same conversion for captures already in hand (e.g. loaded from a dump).
std::vector<AnnotatedSentence> sentences_from_captures(const std::vector<RawCapture>& captures);

// floor(0.8 N) / floor(0.1 N) / remainder over a seeded shuffle.
// Requires N >= 3 so every part can be populated.
DatasetSplit split_dataset(const std::vector<AnnotatedSentence>& sentences, std::uint64_t seed);

// The split sizes alone, for reporting.
struct SplitSizes {
    std::size_t train = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};
SplitSizes split_sizes(std::size_t n);

}  // namespace perio
