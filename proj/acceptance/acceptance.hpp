#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace graphon::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t seed = 20240601;
    std::size_t threads = 0;
};

inline constexpr int kCriterionCount = 12;

/// Short identifier of criterion `id` (1-based).
std::string criterion_name(int id);

/// Runs one criterion. Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, const Options& options = {});

/// "PASS  3 invariance-suite (1.20 s): detail"
std::string format_result(const CriterionResult& r);

std::vector<CriterionResult> run_all(const Options& options = {});

}  // namespace graphon::acceptance
