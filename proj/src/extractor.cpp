#include "perio/extractor.hpp"

#include <regex>

#include "perio/sectionizer.hpp"

namespace perio {

namespace {

constexpr const char* kExtentPattern = "gener?a?l?i?z?e?d?|local?i?z?e?d?";

const std::regex& simple_regex() {
    // Marker, extent, stage, grade, periodontitis — every label, in order.
    static const std::regex re(
        "^\\s*(d|diagnosis) ?([:\\-]+)"
        " ?(gener?a?l?i?z?e?d?|local?i?z?e?d?)"
        " ?(stage) (\\w*)"
        " ?(grade) (\\w*[.,;:!?]*)"
        " ?(periodont?i?t?i?s?)",
        std::regex::icase);
    return re;
}

const std::regex& extent_regex() {
    static const std::regex re(std::string("(") + kExtentPattern + ")", std::regex::icase);
    return re;
}

const std::regex& stage_regex() {
    static const std::regex re("(stage) (\\w*)", std::regex::icase);
    return re;
}

const std::regex& grade_regex() {
    static const std::regex re("(grade) (\\w*[.,;:!?]*)", std::regex::icase);
    return re;
}

FieldSpan make_span(const Section& section, std::size_t pos, std::size_t len) {
    return FieldSpan{section.text.substr(pos, len), section.start + pos, section.start + pos + len};
}

FieldSpan group_span(const Section& section, const std::smatch& m, int group) {
    auto pos = static_cast<std::size_t>(m.position(group));
    auto len = static_cast<std::size_t>(m.length(group));
    return make_span(section, pos, len);
}

// Marker word through the end of the separator run, as one contiguous span.
FieldSpan marker_span(const Section& section, const std::smatch& m) {
    auto start = static_cast<std::size_t>(m.position(1));
    auto end = static_cast<std::size_t>(m.position(2)) + static_cast<std::size_t>(m.length(2));
    return make_span(section, start, end - start);
}

RawCapture base_capture(const Section& section, Method method) {
    RawCapture cap;
    cap.note_id = section.note_id;
    cap.section_start = section.start;
    cap.section_end = section.end;
    cap.section_text = section.text;
    cap.method = method;
    return cap;
}

}  // namespace

std::optional<RawCapture> extract_simple(const Section& section) {
    std::smatch m;
    if (!std::regex_search(section.text, m, simple_regex())) return std::nullopt;
    RawCapture cap = base_capture(section, Method::Simple);
    cap.dx_marker = marker_span(section, m);
    cap.extent_raw = group_span(section, m, 3);
    cap.stage_kw = group_span(section, m, 4);
    cap.stage_raw = group_span(section, m, 5);
    cap.grade_kw = group_span(section, m, 6);
    cap.grade_raw = group_span(section, m, 7);
    cap.perio_token = group_span(section, m, 8);
    return cap;
}

std::optional<RawCapture> extract_advanced(const Section& section) {
    std::smatch m;
    if (!std::regex_search(section.text, m, diagnosis_marker_regex())) return std::nullopt;
    RawCapture cap = base_capture(section, Method::Advanced);
    cap.dx_marker = marker_span(section, m);

    // Order-free: each field is the leftmost hit anywhere in the section.
    std::smatch f;
    if (std::regex_search(section.text, f, extent_regex()))
        cap.extent_raw = group_span(section, f, 1);
    if (std::regex_search(section.text, f, stage_regex())) {
        cap.stage_kw = group_span(section, f, 1);
        cap.stage_raw = group_span(section, f, 2);
    }
    if (std::regex_search(section.text, f, grade_regex())) {
        cap.grade_kw = group_span(section, f, 1);
        cap.grade_raw = group_span(section, f, 2);
    }
    return cap;
}

bool apply_label_filter(const RawCapture& capture) {
    return capture.stage_raw.has_value() && capture.grade_raw.has_value();
}

std::vector<RawCapture> extract_note(const ClinicalNote& note, Method method) {
    std::vector<RawCapture> captures;
    for (const Section& section : split_sections(note)) {
        if (!is_diagnosis_section(section)) continue;
        auto cap = method == Method::Simple ? extract_simple(section) : extract_advanced(section);
        if (cap && apply_label_filter(*cap)) captures.push_back(std::move(*cap));
    }
    return captures;
}

}  // namespace perio
