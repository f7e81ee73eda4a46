#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acsidm/bootstrap.hpp"
#include "acsidm/estimate.hpp"
#include "acsidm/rates.hpp"

namespace acsidm::cli {

enum class ObjectiveSelection { LS, ML, Both };

/// All settings of a run. Defaults reproduce the diabetes scenario: 600
/// invited subjects, visits at 0, 10, ..., 100, 50% participation, B = 1000.
struct RunConfig {
    ThetaParams theta = theta_true();  // generator for simulate, theta* for bootstrap
    ThetaParams initial = kDefaultInitialTheta;
    std::size_t n_subjects = 600;
    std::vector<double> visit_times = regular_times_default();
    double p_part = 0.5;
    std::size_t B = 1000;
    std::uint64_t seed = 1;
    double ode_step = kDefaultOdeStep;
    double curve_step = 1.0;
    ObjectiveSelection objective = ObjectiveSelection::Both;
    unsigned workers = 0;  // 0: one per hardware thread
    MaskMode mask_mode = MaskMode::Redraw;
    std::optional<std::filesystem::path> mask_file;

    static std::vector<double> regular_times_default();
};

/// Sets one key from its textual value. Keys: theta, initial, n_subjects,
/// visit_times, p_part, B, seed, ode_step, curve_step, objective, workers,
/// mask_mode, mask_file. Throws ConfigError.
void set_key(RunConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" lines; '#' starts a comment. Throws ConfigError
/// naming the line, or IoError if the file cannot be read.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// Cross-field checks (B >= 1, grid alignment, ...). Throws ConfigError.
void validate(const RunConfig& config);

unsigned effective_workers(const RunConfig& config);

}  // namespace acsidm::cli
