#include "perio/normalizer.hpp"

#include <cctype>
#include <regex>

namespace perio {

namespace {

std::string strip_non_alnum(const std::string& raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(raw[e - 1]))) --e;
    return raw.substr(b, e - b);
}

std::string lowered(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

Stage normalize_stage(const std::string& raw) {
    const std::string v = lowered(strip_non_alnum(raw));
    if (v == "i" || v == "1") return Stage::I;
    if (v == "ii" || v == "2") return Stage::II;
    if (v == "iii" || v == "3") return Stage::III;
    if (v == "iv" || v == "4") return Stage::IV;
    return Stage::Unknown;
}

Grade normalize_grade(const std::string& raw, const std::map<std::string, Grade>& aliases) {
    const std::string v = lowered(strip_non_alnum(raw));
    if (v == "a") return Grade::A;
    if (v == "b") return Grade::B;
    if (v == "c") return Grade::C;
    if (auto it = aliases.find(v); it != aliases.end()) return it->second;
    return Grade::Unknown;
}

Extent normalize_extent(const std::string& raw) {
    // Same optional-letter patterns the extraction grammars use, applied to
    // the whole stripped token.
    static const std::regex kGeneralized("^gener?a?l?i?z?e?d?$", std::regex::icase);
    static const std::regex kLocalized("^local?i?z?e?d?$", std::regex::icase);
    const std::string v = strip_non_alnum(raw);
    if (std::regex_match(v, kGeneralized)) return Extent::Generalized;
    if (std::regex_match(v, kLocalized)) return Extent::Localized;
    return Extent::Unknown;
}

Diagnosis to_diagnosis(const RawCapture& capture) {
    Diagnosis d;
    if (capture.stage_raw) d.stage = normalize_stage(capture.stage_raw->text);
    if (capture.grade_raw) d.grade = normalize_grade(capture.grade_raw->text);
    if (capture.extent_raw) d.extent = normalize_extent(capture.extent_raw->text);
    return d;
}

std::optional<Diagnosis> resolve_most_severe(const std::vector<Diagnosis>& diagnoses) {
    if (diagnoses.empty()) return std::nullopt;
    const Diagnosis* best = &diagnoses.front();
    for (const Diagnosis& d : diagnoses)
        if (severity_compare(d, *best) > 0) best = &d;
    return *best;
}

}  // namespace perio
