#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdb/config.hpp"
#include "fdb/fbm.hpp"
#include "fdb/limit.hpp"
#include "fdb/stats.hpp"

namespace fdb {

// CSV helpers: comma separated, '.' decimal point, 17 significant digits,
// LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

std::string json_fbm_report(const FbmReport& report);
std::string json_ensemble_report(const EnsembleReport& report, const RunConfig& config);

// Executes one mode, writing its artifacts under config.out and printing a
// one-line summary per artifact. Returns the paths written. Numeric CSV
// content is a pure function of (config, seed).
std::vector<std::string> run(const RunConfig& config, std::ostream& log);

}  // namespace fdb
