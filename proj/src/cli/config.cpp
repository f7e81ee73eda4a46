#include "acsidm/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>

#include <fmt/format.h>

#include "acsidm/cli/errors.hpp"
#include "acsidm/ode.hpp"

namespace acsidm::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double parse_double(std::string_view key, std::string_view text)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
        throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
    return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text)
{
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(fmt::format("{}: '{}' is not a nonnegative integer", key, text));
    return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text)
{
    std::vector<double> values;
    while (true) {
        const auto comma = text.find(',');
        values.push_back(parse_double(key, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return values;
}

ThetaParams parse_theta(std::string_view key, std::string_view text)
{
    const auto v = parse_list(key, text);
    if (v.size() != 3)
        throw ConfigError(fmt::format("{}: expected three comma-separated values", key));
    return {v[0], v[1], v[2]};
}

}  // namespace

std::vector<double> RunConfig::regular_times_default() { return regular_times(0.0, 100.0, 10.0); }

void set_key(RunConfig& config, std::string_view key, std::string_view value)
{
    value = trim(value);
    const std::string k = lower(trim(key));
    if (k == "theta" || k == "theta_true" || k == "theta_star") {
        config.theta = parse_theta(k, value);
    } else if (k == "initial" || k == "theta_initial") {
        config.initial = parse_theta(k, value);
    } else if (k == "n_subjects" || k == "n") {
        config.n_subjects = parse_unsigned(k, value);
    } else if (k == "visit_times") {
        config.visit_times = parse_list(k, value);
    } else if (k == "p_part") {
        config.p_part = parse_double(k, value);
    } else if (k == "b") {
        config.B = parse_unsigned(k, value);
    } else if (k == "seed" || k == "master_seed") {
        config.seed = parse_unsigned(k, value);
    } else if (k == "ode_step") {
        config.ode_step = parse_double(k, value);
    } else if (k == "curve_step") {
        config.curve_step = parse_double(k, value);
    } else if (k == "objective") {
        const std::string v = lower(value);
        if (v == "ls")
            config.objective = ObjectiveSelection::LS;
        else if (v == "ml")
            config.objective = ObjectiveSelection::ML;
        else if (v == "both")
            config.objective = ObjectiveSelection::Both;
        else
            throw ConfigError(fmt::format("objective: '{}' is not one of ls, ml, both", value));
    } else if (k == "workers") {
        config.workers = static_cast<unsigned>(parse_unsigned(k, value));
    } else if (k == "mask_mode") {
        const std::string v = lower(value);
        if (v == "redraw")
            config.mask_mode = MaskMode::Redraw;
        else if (v == "fixed")
            config.mask_mode = MaskMode::Fixed;
        else
            throw ConfigError(fmt::format("mask_mode: '{}' is not one of redraw, fixed", value));
    } else if (k == "mask_file") {
        config.mask_file = std::filesystem::path(std::string(value));
    } else {
        throw ConfigError(fmt::format("unknown configuration key '{}'", key));
    }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read config file {}", path.string()));
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", path.string(), lineno));
        try {
            set_key(config, view.substr(0, eq), view.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        }
    }
}

void validate(const RunConfig& config)
{
    if (!is_valid(config.theta)) throw ConfigError("theta: need theta2 >= 0 and theta3 > 0");
    if (!(config.initial.incidence_slope > 0.0 && config.initial.mortality_ratio > 0.0))
        throw ConfigError("initial: need theta2 > 0 and theta3 > 0");
    if (config.n_subjects == 0) throw ConfigError("n_subjects must be >= 1");
    if (config.B == 0) throw ConfigError("B must be >= 1");
    if (!(config.p_part >= 0.0 && config.p_part <= 1.0))
        throw ConfigError("p_part must lie in [0, 1]");
    if (!(config.ode_step > 0.0)) throw ConfigError("ode_step must be positive");
    if (!(config.curve_step > 0.0)) throw ConfigError("curve_step must be positive");
    const double ratio = config.curve_step / config.ode_step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("curve_step must be a multiple of ode_step");
    if (config.visit_times.empty()) throw ConfigError("visit_times is empty");
    for (std::size_t k = 0; k < config.visit_times.size(); ++k) {
        const double t = config.visit_times[k];
        if (t < 0.0) throw ConfigError("visit_times must be >= 0");
        if (k > 0 && !(t > config.visit_times[k - 1]))
            throw ConfigError("visit_times must be strictly increasing");
        const double n = t / config.ode_step;
        if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
            throw ConfigError(fmt::format("visit time {} is not a multiple of ode_step", t));
    }
    if (config.mask_mode == MaskMode::Fixed && !config.mask_file)
        throw ConfigError("mask_mode = fixed needs mask_file");
}

unsigned effective_workers(const RunConfig& config)
{
    if (config.workers > 0) return config.workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace acsidm::cli
