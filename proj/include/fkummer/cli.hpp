#pragma once

// Command-line front end. run() is the whole program: it parses args
// (without the program name), writes data to out and diagnostics to err, and
// returns the exit code: 0 success/pass, 1 verification failure, 2 usage or
// regime error.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fk {

inline constexpr const char* cli_version = "0.1.0";

using NamedValues = std::vector<std::pair<std::string, double>>;

struct SuiteReport {
    std::string suite;
    NamedValues residuals;
    double max_residual = 0;
    NamedValues values;  // suite-specific extra output
    std::optional<bool> pass;  // empty for exploratory runs
};

// Randomized suites draw pair i from Rng(seed).split(i).
SuiteReport suite_hv(double alpha, double beta, double gamma, int order, double tol, bool exploratory);
SuiteReport suite_k(std::uint64_t seed, int order, double tol, int pairs = 10);
SuiteReport suite_subordination(std::uint64_t seed, int order, double tol, const std::vector<double>& grid,
                                int pairs = 10);
SuiteReport suite_partitions(std::uint64_t seed, double tol, int pairs = 20);
SuiteReport suite_characterize(int characterization, double alpha, double beta, double gamma, double tol,
                               const std::vector<double>& grid);

// Order cap from FREEKUMMER_MAX_ORDER, or fallback when unset.
int max_order_from_env(int fallback);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fk
