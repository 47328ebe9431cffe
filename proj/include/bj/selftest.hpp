#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace bj {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit = 0.0;  ///< seconds; 0 means unlimited
};

struct SelftestOptions {
    std::filesystem::path fixture;      ///< six-country OWID-schema CSV
    std::filesystem::path scratch_dir;  ///< pipeline output lands here
};

/// The six countries in the bundled fixture.
[[nodiscard]] std::vector<std::string> fixture_countries();

/// Runs the Monte Carlo and end-to-end acceptance checks, printing one
/// PASS/FAIL line per criterion to `log` as each one finishes.
std::vector<CriterionResult> run_selftest(const SelftestOptions& options, std::ostream& log);

}  // namespace bj
