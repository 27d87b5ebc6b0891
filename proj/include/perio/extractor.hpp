// The two regular-expression grammars over diagnosis sections.
//
// The simple grammar requires every label in a fixed order right after the
// marker: extent, "stage" + value, "grade" + value, then a periodontitis
// token. The advanced grammar requires only the marker at the start and
// captures extent, stage and grade opportunistically anywhere in the
// section (lookahead semantics, leftmost hit per field). Both share the
// typo-tolerant extent pattern, and the grade value may carry trailing
// punctuation which normalization strips later.
#pragma once

#include <optional>
#include <vector>

#include "perio/types.hpp"

namespace perio {

std::optional<RawCapture> extract_simple(const Section& section);
std::optional<RawCapture> extract_advanced(const Section& section);

// True iff marker, stage value and grade value are all present. Extent is
// not required.
bool apply_label_filter(const RawCapture& capture);

// Runs the selected grammar over every diagnosis section of the note and
// keeps the captures that pass the label filter, in section order.
std::vector<RawCapture> extract_note(const ClinicalNote& note, Method method);

}  // namespace perio
