// Canonicalization of raw captured strings into the diagnosis domain.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perio/types.hpp"

namespace perio {

// All normalizers are total: anything unmappable becomes Unknown.
Stage normalize_stage(const std::string& raw);

// Optional alias table for site-specific grade spellings; by default anything
// that is not a single a/b/c letter (e.g. "ii") maps to Unknown.
Grade normalize_grade(const std::string& raw,
                      const std::map<std::string, Grade>& aliases = {});

Extent normalize_extent(const std::string& raw);

// Fieldwise normalization of a capture; absent fields stay Unknown.
Diagnosis to_diagnosis(const RawCapture& capture);

// Maximum under the severity order (stage, extent, grade); first occurrence
// wins on full ties. Empty input yields nullopt.
std::optional<Diagnosis> resolve_most_severe(const std::vector<Diagnosis>& diagnoses);

}  // namespace perio
