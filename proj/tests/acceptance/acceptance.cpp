// acceptance.cpp — Runs the acceptance criteria and prints one pass/fail line per criterion

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "xymark/validation.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = xymark::all_check_ids();
    int failed = 0;
    for (int id : ids) {
        const auto r = xymark::run_check(id);
        std::printf("[%s] criterion %d (%s): %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
    return failed == 0 ? 0 : 1;
}
