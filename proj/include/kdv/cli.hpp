#pragma once

namespace kdv {

/// Entry point of the kdvvessel tool. Exit codes: 0 all checks passed,
/// 1 some check failed, 2 invalid configuration or arguments, 3 numerical
/// failure (singular X, pole, overflow).
int run_cli(int argc, char** argv);

}  // namespace kdv
