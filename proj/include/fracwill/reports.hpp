#pragma once

#include <iosfwd>
#include <string>

#include "fracwill/config.hpp"
#include "fracwill/profile.hpp"

namespace fracwill {

// Solves the profile for the config, or reuses profile_cache when it matches s, L and n.
SampledProfile obtain_profile(const RunConfig& cfg);

struct RunOutcome {
    std::string csv;
    int failed_rows = 0;  // rows that ended in an error
};

// Builds the subcommand's CSV; the first line is "# " + cfg.describe().
// Row errors are recorded in the CSV and counted; other errors propagate.
RunOutcome run_report(const RunConfig& cfg);

// Writes the CSV to cfg.output and returns the exit status: 0 when every row completed,
// 1 when a row failed, 2 when the run could not complete. Failures print one line
// "error kind=<kind> subcommand=<name> message=<text>" to err.
int execute(const RunConfig& cfg, std::ostream& err);

}  // namespace fracwill
