#pragma once

// Acceptance checklist: thirteen end-to-end criteria spanning law validation,
// coordinate calculus, the classifying solver, portraits, and tower
// realization.  Every check runs on fixed seeds and frozen fixtures, so the
// report is byte-identical across runs.

#include <iosfwd>
#include <string>
#include <vector>

namespace lt {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // empty on success, first failure otherwise
};

// Runs all criteria in order.  Never throws: a thrown error inside a
// criterion is recorded as that criterion's failure.
std::vector<CriterionResult> run_selftest();

// One line per criterion plus a summary footer; true when everything passed.
bool print_selftest(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace lt
