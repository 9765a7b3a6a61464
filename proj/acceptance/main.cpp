#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria: one PASS/FAIL line per criterion"};
    std::vector<int> only;
    graphon::acceptance::Options options;
    app.add_option("--only", only, "Criterion ids to run (default: all)")
        ->check(CLI::Range(1, graphon::acceptance::kCriterionCount));
    app.add_option("--seed", options.seed, "Base seed");
    app.add_option("--threads", options.threads, "Worker threads for the experiments (0: all cores)");
    CLI11_PARSE(app, argc, argv);

    if (only.empty())
        for (int id = 1; id <= graphon::acceptance::kCriterionCount; ++id) only.push_back(id);
    int failures = 0;
    for (int id : only) {
        const auto r = graphon::acceptance::run_criterion(id, options);
        std::printf("%s\n", graphon::acceptance::format_result(r).c_str());
        std::fflush(stdout);
        failures += r.passed ? 0 : 1;
    }
    std::printf("%zu criteria, %d failed\n", only.size(), failures);
    return failures == 0 ? 0 : 1;
}
