#include "perio/types.hpp"

#include <algorithm>

namespace perio {

std::string to_string(Stage s) {
    switch (s) {
        case Stage::I: return "I";
        case Stage::II: return "II";
        case Stage::III: return "III";
        case Stage::IV: return "IV";
        default: return "unknown";
    }
}

std::string to_string(Grade g) {
    switch (g) {
        case Grade::A: return "A";
        case Grade::B: return "B";
        case Grade::C: return "C";
        default: return "unknown";
    }
}

std::string to_string(Extent e) {
    switch (e) {
        case Extent::Localized: return "localized";
        case Extent::Generalized: return "generalized";
        default: return "unknown";
    }
}

std::string to_string(Method m) {
    return m == Method::Simple ? "simple" : "advanced";
}

std::string to_string(SpanLabel l) {
    switch (l) {
        case SpanLabel::Stage: return "STAGE";
        case SpanLabel::Grade: return "GRADE";
        default: return "EXTENT";
    }
}

SpanLabel span_label_from_string(const std::string& s) {
    if (s == "STAGE") return SpanLabel::Stage;
    if (s == "GRADE") return SpanLabel::Grade;
    if (s == "EXTENT") return SpanLabel::Extent;
    throw Error(ErrorKind::Domain, "unknown span label: " + s);
}

int severity_compare(const Diagnosis& a, const Diagnosis& b) {
    if (a.stage != b.stage) return static_cast<int>(a.stage) < static_cast<int>(b.stage) ? -1 : 1;
    if (a.extent != b.extent) return static_cast<int>(a.extent) < static_cast<int>(b.extent) ? -1 : 1;
    if (a.grade != b.grade) return static_cast<int>(a.grade) < static_cast<int>(b.grade) ? -1 : 1;
    return 0;
}

const std::vector<std::string>& SynthConfig::noise_kinds() {
    static const std::vector<std::string> kinds = {
        "extent_typo",        "grade_trailing_symbol", "arabic_stage", "order_permuted",
        "non_perio_line",     "multi_diagnosis",       "missing_extent",
    };
    return kinds;
}

SynthConfig SynthConfig::with_defaults(std::size_t n_notes, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n_notes = n_notes;
    cfg.seed = seed;
    cfg.noise_rates = {
        {"extent_typo", 0.12},    {"grade_trailing_symbol", 0.15}, {"arabic_stage", 0.30},
        {"order_permuted", 0.35}, {"non_perio_line", 0.10},        {"multi_diagnosis", 0.08},
        {"missing_extent", 0.15},
    };
    return cfg;
}

void SynthConfig::validate() const {
    if (n_notes < 1) throw Error(ErrorKind::Invalid, "n_notes must be >= 1");
    const auto& kinds = noise_kinds();
    for (const auto& [kind, p] : noise_rates) {
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
            throw Error(ErrorKind::Invalid, "unknown noise kind: " + kind);
        if (!(p >= 0.0 && p <= 1.0))
            throw Error(ErrorKind::Invalid, "noise rate for " + kind + " outside [0,1]");
    }
}

}  // namespace perio
