// Built-in checks for the five reference diagnosis sentences (capture O/X
// matrix for both grammars, after the label filter) and the 8:1:1 split
// sizes at 693 and 3,771 records.
#pragma once

#include <string>

namespace perio {

struct TableCheck {
    bool ok = false;
    std::string text;  // rendered matrix and split rows with per-line status
};

TableCheck reproduce_tables();

}  // namespace perio
