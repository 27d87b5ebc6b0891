#include "perio/tables.hpp"

#include <array>
#include <sstream>

#include "perio/dataset.hpp"
#include "perio/extractor.hpp"
#include "perio/sectionizer.hpp"

namespace perio {

namespace {

struct ReferenceSentence {
    const char* text;
    bool simple;    // capturable by the simple grammar after the filter
    bool advanced;  // capturable by the advanced grammar after the filter
};

constexpr std::array<ReferenceSentence, 5> kReference = {{
    {"d: generalized stage iii grade c periodontitis.", true, true},
    {"d- localized periodontitis, stage 3 grade b.", false, true},
    {"d: tentative diagnosis is stage 3 grade c generalized", false, true},
    {"d- stage iii grade b periodontitis.", false, true},
    {"d : generalized plaque induced gingivitis", false, false},
}};

bool captured(const std::string& text, Method method) {
    ClinicalNote note{"ref", text};
    return !extract_note(note, method).empty();
}

struct SplitRow {
    std::size_t total, train, validation, test;
};

constexpr std::array<SplitRow, 2> kSplitRows = {{
    {693, 554, 69, 70},
    {3771, 3016, 377, 378},
}};

}  // namespace

TableCheck reproduce_tables() {
    TableCheck check;
    check.ok = true;
    std::ostringstream out;

    out << "capture matrix (simple / advanced):\n";
    for (std::size_t i = 0; i < kReference.size(); ++i) {
        const auto& ref = kReference[i];
        const bool simple = captured(ref.text, Method::Simple);
        const bool advanced = captured(ref.text, Method::Advanced);
        const bool row_ok = simple == ref.simple && advanced == ref.advanced;
        check.ok = check.ok && row_ok;
        out << "  " << (i + 1) << ". " << (simple ? 'O' : 'X') << " / "
            << (advanced ? 'O' : 'X') << "  expected " << (ref.simple ? 'O' : 'X') << " / "
            << (ref.advanced ? 'O' : 'X') << "  " << (row_ok ? "ok" : "MISMATCH") << "  \""
            << ref.text << "\"\n";
    }

    out << "split sizes (train/validation/test):\n";
    for (const auto& row : kSplitRows) {
        const SplitSizes sizes = split_sizes(row.total);
        const bool row_ok = sizes.train == row.train && sizes.validation == row.validation &&
                            sizes.test == row.test;
        check.ok = check.ok && row_ok;
        out << "  n=" << row.total << " -> " << sizes.train << "/" << sizes.validation << "/"
            << sizes.test << "  expected " << row.train << "/" << row.validation << "/" << row.test
            << "  " << (row_ok ? "ok" : "MISMATCH") << "\n";
    }

    check.text = out.str();
    return check;
}

}  // namespace perio
