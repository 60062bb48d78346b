#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kdv {

enum class Level { quick, full };

struct CheckOptions {
    Level level = Level::full;
    std::uint64_t seed = 20240611;
    int threads = 1;
    /// Per-check override of the primary tolerance, keyed by check name.
    std::map<std::string, double> tolerance;
};

struct CheckResult {
    std::string name;
    double value = 0.0;      ///< primary measured quantity
    double tolerance = 0.0;  ///< bound on `value`
    bool pass = false;
    double runtime_ms = 0.0;
    bool errored = false;  ///< a numerical error aborted the check
    std::string notes;     ///< secondary measurements, one "key=value" per item
};

/// Names of the acceptance checks, in suite order.
const std::vector<std::string>& check_names();

/// Runs one named check. Throws InvalidArgument for an unknown name; numerical
/// errors propagate.
CheckResult run_check(const std::string& name, const CheckOptions& options);

/// Runs the named checks (all when empty). Numerical errors are recorded as a
/// failed, errored result instead of propagating.
std::vector<CheckResult> run_suite(const CheckOptions& options, const std::vector<std::string>& names = {});

}  // namespace kdv
