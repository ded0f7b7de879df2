// Runs the full acceptance checklist and prints one line per criterion.
// Exit status 0 only when every criterion passes.

#include <iostream>

#include "stagedlt/selftest.hpp"

int main() {
    auto results = lt::run_selftest();
    bool ok = lt::print_selftest(std::cout, results);
    return ok ? 0 : 1;
}
