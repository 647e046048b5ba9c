#ifndef CIRCTRUNC_TOOLS_CLI_HPP
#define CIRCTRUNC_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "circtrunc/risk.hpp"

namespace circtrunc::cli {

enum ExitCode { kOk = 0, kUsage = 2, kNumeric = 3 };

/// Entry point shared by the executable and the tests. Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Canned experiments behind `repro`.
std::vector<RiskCurve> repro_figure1(std::size_t replicates, std::uint64_t seed,
                                     std::size_t points, unsigned threads);
std::vector<RiskCurve> repro_figure2(std::size_t replicates, std::uint64_t seed,
                                     std::size_t points, unsigned threads);

}  // namespace circtrunc::cli

#endif  // CIRCTRUNC_TOOLS_CLI_HPP
