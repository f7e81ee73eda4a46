#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "acsidm/bootstrap.hpp"
#include "acsidm/cli/config.hpp"
#include "acsidm/estimate.hpp"
#include "acsidm/sampling.hpp"

namespace acsidm::cli {

struct SimulateOutput {
    AcsTable table;
    VisitPlan plan;
    std::vector<std::size_t> histogram;
};

/// Writes acs.csv, visits.csv and mask.csv into out_dir.
SimulateOutput cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir,
                            std::ostream& log);

/// Writes estimates.csv, model_curve.csv and observed.csv into out_dir.
std::vector<EstimationResult> cmd_estimate(const RunConfig& config,
                                           const std::filesystem::path& acs_file,
                                           const std::filesystem::path& out_dir,
                                           std::ostream& log);

/// Writes replicates.csv and summary.csv into out_dir. theta* is config.theta.
std::vector<BootstrapRun> cmd_bootstrap(const RunConfig& config,
                                        const std::filesystem::path& out_dir, std::ostream& log);

/// Writes hist_<kind>_theta<j>.csv (bin_left,count) for every kind and
/// component with at least one converged replicate. Returns the files written.
std::vector<std::filesystem::path> cmd_report(const std::filesystem::path& replicates_file,
                                              const std::filesystem::path& out_dir,
                                              std::ostream& log);

/// Entry point of the acsidm executable. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acsidm::cli
