// Runs the twelve acceptance criteria and prints one PASS/FAIL line for each.
#include "bj/selftest.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    bj::SelftestOptions options;
    options.fixture = BJ_TEST_DATA "/owid_six_countries.csv";
    options.scratch_dir = argc > 1 ? std::filesystem::path(argv[1])
                                   : std::filesystem::temp_directory_path() / "bj_acceptance";
    const auto results = bj::run_selftest(options, std::cout);
    const bool all_passed =
        std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    std::cout << (all_passed ? "all acceptance criteria passed" : "acceptance FAILED") << '\n';
    return all_passed ? 0 : 1;
}
