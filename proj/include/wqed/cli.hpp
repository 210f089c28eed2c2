// cli.hpp — command-line front end: subcommands producing plot-ready tables

#pragma once

#include "wqed/model.hpp"
#include "wqed/output.hpp"

#include <string>
#include <vector>

namespace wqed {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitVerification = 4 };

struct GridSpec {
    double min{0.0};
    double max{0.0};
    std::size_t points{0};
    bool log{false};

    std::vector<double> values() const;
};

struct RunConfig {
    std::string subcommand;
    ModelParams params;
    Format format{Format::csv};
    std::string output;  // empty or "-" for stdout
    double tol{1e-10};

    GridSpec g_grid{0.01, 3.0, 100, false};
    GridSpec k_grid{0.0, 0.0, 999, false};  // interior point count only
    GridSpec delta_grid{-1.9, 1.9, 0, false};
    GridSpec t_grid{0.0, 200.0, 400, false};
    std::vector<double> delta_list{-1.5, -1.0, -0.5, 0.0};
    std::vector<double> g_list;
    std::vector<double> gamma_e_list;
    bool normalize{false};
    double t{75.0};
    long half_width{-1};  // -1: causal cone plus margin
    long n_sites{1201};
    double verify_tol{1e-6};
    double field_time{-1.0};  // verify: optional field snapshot time
};

// Parses argv, runs the subcommand, writes its table, and returns an exit
// code. Errors are reported on stderr as a one-line JSON record.
int run(int argc, const char* const* argv);

// Executes an already parsed configuration; throws on failure. Verification
// failures are reported through the return value.
int execute(const RunConfig& config);

}  // namespace wqed
