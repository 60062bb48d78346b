// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [--quick] [--seed N] [check ...]
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "kdv/checks.hpp"

int main(int argc, char** argv) {
    kdv::CheckOptions options;
    std::vector<std::string> names;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) options.level = kdv::Level::quick;
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) options.seed = std::strtoull(argv[++i], nullptr, 10);
        else names.emplace_back(argv[i]);
    }
    const auto& all = kdv::check_names();
    std::vector<kdv::CheckResult> results;
    try {
        results = kdv::run_suite(options, names);
    } catch (const std::exception& e) {
        std::printf("ERROR %s\n", e.what());
        return 2;
    }
    int failed = 0;
    for (const auto& r : results) {
        std::size_t id = 0;
        while (id < all.size() && all[id] != r.name) ++id;
        std::printf("criterion %2zu %-20s %s value=%.3g tolerance=%.3g runtime_ms=%.1f%s%s\n", id + 1, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.value, r.tolerance, r.runtime_ms, r.notes.empty() ? "" : " | ",
                    r.notes.c_str());
        failed += !r.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
