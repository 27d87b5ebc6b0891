// Newline-based note sectioning with original-text offsets, plus the
// diagnosis-marker test that screens sections for extraction.
#pragma once

#include <regex>
#include <vector>

#include "perio/types.hpp"

namespace perio {

// Marker pattern shared by the section screen and both extraction grammars.
// Group 1 is the marker word, group 2 the separator run.
const std::regex& diagnosis_marker_regex();

// Splits on newlines ("\r\n" counts as one); empty lines are dropped.
// Offsets index the original note text and each section's text equals the
// note substring at [start, end).
std::vector<Section> split_sections(const ClinicalNote& note);

// True iff the section, after leading whitespace, starts with "d" or
// "diagnosis" (any case) followed by an optional space and one or more of
// ':' or '-'.
bool is_diagnosis_section(const Section& section);

}  // namespace perio
