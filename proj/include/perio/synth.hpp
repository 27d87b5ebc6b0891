// Deterministic synthetic note generator. Notes are built from five
// diagnosis-line families (ordered full sentence, periodontitis-early,
// connective phrase with trailing extent, extent-less, and a non-perio
// gingivitis line) wrapped in boilerplate sections, with configurable noise:
// extent typos, trailing grade symbols, arabic stage digits, permuted label
// order, extent omission, secondary diagnoses and gingivitis-only notes.
#pragma once

#include <utility>
#include <vector>

#include "perio/types.hpp"

namespace perio {

struct SynthCorpus {
    std::vector<ClinicalNote> notes;
    std::vector<GoldRecord> gold;
};

SynthCorpus generate_synthetic_corpus(const SynthConfig& config);

}  // namespace perio
