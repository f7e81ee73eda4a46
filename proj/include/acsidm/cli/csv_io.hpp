#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "acsidm/bootstrap.hpp"
#include "acsidm/sampling.hpp"

namespace acsidm::cli {

// All files are UTF-8, comma-separated, LF line endings, with a header row.
// Reals are written in shortest round-trip form; theta2 in natural units.

/// States as rows, visit times as columns:
///   state,0,10,...
///   Non-diseased,...
///   Diseased,...
///   Dead,...
///   Sum,...
void write_acs_csv(std::ostream& out, const AcsTable& table);

/// Reads either orientation; a header starting with "state" means states as
/// rows, "t" or "time" means one row per visit (t,Non-diseased,Diseased,Dead[,Sum]).
/// The Sum row/column is optional but must match the state counts. Throws
/// DataError with the source name and line number.
AcsTable read_acs_csv(std::istream& in, const std::string& source = "<input>");
AcsTable read_acs_file(const std::filesystem::path& path);

/// visits,0,1,...,K / subjects,h0,h1,...,hK
void write_visit_histogram_csv(std::ostream& out, const std::vector<std::size_t>& histogram);

/// subject,<t_1>,...,<t_K> then one 0/1 row per subject (1-based index).
void write_mask_csv(std::ostream& out, const VisitPlan& plan);
VisitPlan read_mask_csv(std::istream& in, double participation,
                        const std::string& source = "<input>");

struct ReplicateRow {
    std::size_t b = 0;
    ObjectiveKind kind = ObjectiveKind::LeastSquares;
    ThetaParams theta;
    bool converged = false;
};

/// b,kind,theta1,theta2,theta3,converged with an LS and an ML row per replicate.
void write_replicates_csv(std::ostream& out, const std::vector<BootstrapRun>& runs);
std::vector<ReplicateRow> read_replicates_csv(std::istream& in,
                                              const std::string& source = "<input>");

std::string format_real(double value);

/// Writes `contents` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace acsidm::cli
