// Acceptance runner: one pass/fail line per criterion; nonzero exit on any
// failure.  The same checks back the CLI's `examples --run-all`.

#include "tilecoh/examples_suite.hpp"

#include <iostream>

int main() {
    bool all = true;
    int i = 0;
    for (const tilecoh::CheckResult& r : tilecoh::run_examples_suite()) {
        ++i;
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << i << "  " << r.name << "\n";
        std::cout << "      " << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all criteria satisfied" : "FAILURES PRESENT") << "\n";
    return all ? 0 : 1;
}
