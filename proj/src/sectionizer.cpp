#include "perio/sectionizer.hpp"

#include <regex>

namespace perio {

std::vector<Section> split_sections(const ClinicalNote& note) {
    std::vector<Section> sections;
    const std::string& t = note.text;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i == t.size() || t[i] == '\n') {
            std::size_t line_end = i;
            // "\r\n" is a single newline; keep the '\r' out of the section.
            if (line_end > line_start && t[line_end - 1] == '\r') --line_end;
            if (line_end > line_start) {
                sections.push_back(Section{note.note_id, line_start, line_end,
                                           t.substr(line_start, line_end - line_start)});
            }
            line_start = i + 1;
        }
    }
    return sections;
}

const std::regex& diagnosis_marker_regex() {
    static const std::regex marker("^\\s*(d|diagnosis) ?([:\\-]+)", std::regex::icase);
    return marker;
}

bool is_diagnosis_section(const Section& section) {
    return std::regex_search(section.text, diagnosis_marker_regex());
}

}  // namespace perio
