#include "acsidm/cli/csv_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "acsidm/cli/errors.hpp"

namespace acsidm::cli {

namespace {

struct CsvLine {
    std::size_t number = 0;
    std::vector<std::string> cells;
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Nonblank lines split on commas.
std::vector<CsvLine> read_lines(std::istream& in)
{
    std::vector<CsvLine> lines;
    std::string raw;
    for (std::size_t number = 1; std::getline(in, raw); ++number) {
        if (trim(raw).empty()) continue;
        CsvLine line{number, {}};
        std::string_view rest(raw);
        while (true) {
            const auto comma = rest.find(',');
            line.cells.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what)
{
    throw DataError(fmt::format("{}:{}: {}", source, line, what));
}

std::int64_t parse_count(const std::string& source, std::size_t line, const std::string& cell,
                         const std::string& where)
{
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
        fail(source, line, fmt::format("{}: '{}' is not an integer count", where, cell));
    if (value < 0) fail(source, line, fmt::format("{}: negative count {}", where, value));
    return value;
}

double parse_real(const std::string& source, std::size_t line, const std::string& cell,
                  const std::string& where)
{
    if (lower(cell) == "nan") return std::nan("");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
        fail(source, line, fmt::format("{}: '{}' is not a number", where, cell));
    return value;
}

// 0 = Non-diseased, 1 = Diseased, 2 = Dead, 3 = Sum
std::optional<std::size_t> state_index(const std::string& label)
{
    const std::string l = lower(label);
    if (l == "non-diseased" || l == "nondiseased" || l == "non_diseased") return 0;
    if (l == "diseased") return 1;
    if (l == "dead") return 2;
    if (l == "sum" || l == "total" || label == "Σ") return 3;
    return std::nullopt;
}

void check_times(const std::string& source, std::size_t line, const std::vector<double>& times)
{
    if (times.empty()) fail(source, line, "no visit times");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            fail(source, line, "visit times must be strictly increasing");
    for (double t : times)
        if (!std::isfinite(t)) fail(source, line, "visit times must be finite");
}

AcsTable finish_table(const std::string& source, std::vector<double> times,
                      std::vector<std::array<std::int64_t, 3>> counts,
                      const std::vector<std::optional<std::int64_t>>& sums,
                      const std::vector<std::size_t>& sum_lines)
{
    AcsTable table;
    table.visit_times = std::move(times);
    table.counts = std::move(counts);
    for (std::size_t k = 0; k < table.counts.size(); ++k) {
        const auto& c = table.counts[k];
        const std::int64_t total = c[0] + c[1] + c[2];
        if (sums[k] && *sums[k] != total)
            fail(source, sum_lines[k],
                 fmt::format("Sum at column t={} is {} but the state counts add up to {}",
                             format_real(table.visit_times[k]), *sums[k], total));
        table.totals.push_back(total);
    }
    return table;
}

AcsTable read_states_as_rows(const std::vector<CsvLine>& lines, const std::string& source)
{
    const auto& header = lines.front();
    std::vector<double> times;
    for (std::size_t c = 1; c < header.cells.size(); ++c)
        times.push_back(parse_real(source, header.number, header.cells[c],
                                   fmt::format("header column {}", c + 1)));
    check_times(source, header.number, times);
    const std::size_t k_visits = times.size();

    std::vector<std::array<std::int64_t, 3>> counts(k_visits, {0, 0, 0});
    std::vector<std::optional<std::int64_t>> sums(k_visits);
    std::vector<std::size_t> sum_lines(k_visits, 0);
    std::array<bool, 4> seen{};
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        if (line.cells.size() != k_visits + 1)
            fail(source, line.number,
                 fmt::format("expected {} columns, found {}", k_visits + 1, line.cells.size()));
        const auto state = state_index(line.cells[0]);
        if (!state) fail(source, line.number, fmt::format("unknown state '{}'", line.cells[0]));
        if (seen[*state]) fail(source, line.number, fmt::format("duplicate row '{}'", line.cells[0]));
        seen[*state] = true;
        for (std::size_t k = 0; k < k_visits; ++k) {
            const auto where = fmt::format("row {} column t={}", line.cells[0], header.cells[k + 1]);
            const std::int64_t v = parse_count(source, line.number, line.cells[k + 1], where);
            if (*state == 3) {
                sums[k] = v;
                sum_lines[k] = line.number;
            } else {
                counts[k][*state] = v;
            }
        }
    }
    for (std::size_t s = 0; s < 3; ++s)
        if (!seen[s]) fail(source, lines.back().number, "missing one of the state rows");
    return finish_table(source, std::move(times), std::move(counts), sums, sum_lines);
}

AcsTable read_times_as_rows(const std::vector<CsvLine>& lines, const std::string& source)
{
    const auto& header = lines.front();
    std::array<std::optional<std::size_t>, 4> column;
    for (std::size_t c = 1; c < header.cells.size(); ++c) {
        const auto state = state_index(header.cells[c]);
        if (!state) fail(source, header.number, fmt::format("unknown column '{}'", header.cells[c]));
        if (column[*state]) fail(source, header.number, "duplicate column");
        column[*state] = c;
    }
    if (!column[0] || !column[1] || !column[2])
        fail(source, header.number, "missing one of the state columns");

    std::vector<double> times;
    std::vector<std::array<std::int64_t, 3>> counts;
    std::vector<std::optional<std::int64_t>> sums;
    std::vector<std::size_t> sum_lines;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        if (line.cells.size() != header.cells.size())
            fail(source, line.number,
                 fmt::format("expected {} columns, found {}", header.cells.size(), line.cells.size()));
        times.push_back(parse_real(source, line.number, line.cells[0], "time"));
        std::array<std::int64_t, 3> row{};
        for (std::size_t s = 0; s < 3; ++s)
            row[s] = parse_count(source, line.number, line.cells[*column[s]],
                                 fmt::format("t={} column {}", line.cells[0], header.cells[*column[s]]));
        counts.push_back(row);
        if (column[3])
            sums.push_back(parse_count(source, line.number, line.cells[*column[3]],
                                       fmt::format("t={} column Sum", line.cells[0])));
        else
            sums.push_back(std::nullopt);
        sum_lines.push_back(line.number);
    }
    check_times(source, header.number, times);
    return finish_table(source, std::move(times), std::move(counts), sums, sum_lines);
}

}  // namespace

std::string format_real(double value)
{
    if (std::isnan(value)) return "nan";
    return fmt::format("{}", value);
}

void write_acs_csv(std::ostream& out, const AcsTable& table)
{
    validate(table);
    out << "state";
    for (double t : table.visit_times) out << ',' << format_real(t);
    out << '\n';
    constexpr std::array<const char*, 3> kLabels{"Non-diseased", "Diseased", "Dead"};
    for (std::size_t j = 0; j < 3; ++j) {
        out << kLabels[j];
        for (const auto& row : table.counts) out << ',' << row[j];
        out << '\n';
    }
    out << "Sum";
    for (auto total : table.totals) out << ',' << total;
    out << '\n';
}

AcsTable read_acs_csv(std::istream& in, const std::string& source)
{
    const auto lines = read_lines(in);
    if (lines.size() < 2) throw DataError(fmt::format("{}: no ACS table found", source));
    const std::string first = lower(lines.front().cells.front());
    AcsTable table;
    if (first == "state")
        table = read_states_as_rows(lines, source);
    else if (first == "t" || first == "time")
        table = read_times_as_rows(lines, source);
    else
        fail(source, lines.front().number,
             fmt::format("header must start with 'state' or 't', found '{}'", first));
    return table;
}

AcsTable read_acs_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
    return read_acs_csv(in, path.string());
}

void write_visit_histogram_csv(std::ostream& out, const std::vector<std::size_t>& histogram)
{
    out << "visits";
    for (std::size_t v = 0; v < histogram.size(); ++v) out << ',' << v;
    out << "\nsubjects";
    for (auto count : histogram) out << ',' << count;
    out << '\n';
}

void write_mask_csv(std::ostream& out, const VisitPlan& plan)
{
    out << "subject";
    for (double t : plan.visit_times) out << ',' << format_real(t);
    out << '\n';
    for (std::size_t i = 0; i < plan.n_subjects; ++i) {
        out << i + 1;
        for (std::size_t k = 0; k < plan.n_visits(); ++k) out << ',' << (plan.attends(i, k) ? 1 : 0);
        out << '\n';
    }
}

VisitPlan read_mask_csv(std::istream& in, double participation, const std::string& source)
{
    const auto lines = read_lines(in);
    if (lines.size() < 2) throw DataError(fmt::format("{}: no mask rows", source));
    const auto& header = lines.front();
    if (lower(header.cells.front()) != "subject")
        fail(source, header.number, "header must start with 'subject'");

    VisitPlan plan;
    plan.participation = participation;
    for (std::size_t c = 1; c < header.cells.size(); ++c)
        plan.visit_times.push_back(parse_real(source, header.number, header.cells[c], "visit time"));
    check_times(source, header.number, plan.visit_times);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        if (line.cells.size() != header.cells.size())
            fail(source, line.number,
                 fmt::format("expected {} columns, found {}", header.cells.size(), line.cells.size()));
        for (std::size_t c = 1; c < line.cells.size(); ++c) {
            const auto& cell = line.cells[c];
            if (cell != "0" && cell != "1")
                fail(source, line.number, fmt::format("mask cell '{}' is not 0 or 1", cell));
            plan.mask.push_back(cell == "1" ? 1 : 0);
        }
    }
    plan.n_subjects = lines.size() - 1;
    return plan;
}

void write_replicates_csv(std::ostream& out, const std::vector<BootstrapRun>& runs)
{
    out << "b,kind,theta1,theta2,theta3,converged\n";
    for (const auto& run : runs) {
        for (auto kind : {ObjectiveKind::LeastSquares, ObjectiveKind::MaxLikelihood}) {
            const bool ls = kind == ObjectiveKind::LeastSquares;
            const ThetaParams& t = ls ? run.theta_ls : run.theta_ml;
            out << run.b_index << ',' << to_string(kind) << ',' << format_real(t.onset_age) << ','
                << format_real(t.incidence_slope) << ',' << format_real(t.mortality_ratio) << ','
                << ((ls ? run.ls_converged : run.ml_converged) ? 1 : 0) << '\n';
        }
    }
}

std::vector<ReplicateRow> read_replicates_csv(std::istream& in, const std::string& source)
{
    const auto lines = read_lines(in);
    if (lines.empty()) throw DataError(fmt::format("{}: empty replicates file", source));
    const std::vector<std::string> expected{"b", "kind", "theta1", "theta2", "theta3", "converged"};
    if (lines.front().cells != expected)
        fail(source, lines.front().number,
             "header must be b,kind,theta1,theta2,theta3,converged");

    std::vector<ReplicateRow> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& line = lines[r];
        if (line.cells.size() != expected.size())
            fail(source, line.number,
                 fmt::format("expected {} columns, found {}", expected.size(), line.cells.size()));
        ReplicateRow row;
        row.b = static_cast<std::size_t>(parse_count(source, line.number, line.cells[0], "b"));
        const std::string kind = lower(line.cells[1]);
        if (kind == "ls")
            row.kind = ObjectiveKind::LeastSquares;
        else if (kind == "ml")
            row.kind = ObjectiveKind::MaxLikelihood;
        else
            fail(source, line.number, fmt::format("kind '{}' is not LS or ML", line.cells[1]));
        row.theta = {parse_real(source, line.number, line.cells[2], "theta1"),
                     parse_real(source, line.number, line.cells[3], "theta2"),
                     parse_real(source, line.number, line.cells[4], "theta3")};
        if (line.cells[5] != "0" && line.cells[5] != "1")
            fail(source, line.number, "converged must be 0 or 1");
        row.converged = line.cells[5] == "1";
        rows.push_back(row);
    }
    return rows;
}

void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << contents;
    out.flush();
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

}  // namespace acsidm::cli
