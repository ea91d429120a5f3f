#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blockbeta/report.hpp"

namespace blockbeta {

/// Names accepted by run_suite, without "all".
const std::vector<std::string>& suite_names();

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// Multiplies every Monte Carlo sample and replication count (>0).
    double scale = 1.0;
};

/// Runs one named verification (or "all") and returns the merged reports.
/// Unknown names raise std::invalid_argument.
std::vector<Report> run_suite(const std::string& name, const SuiteOptions& opt = {});

}  // namespace blockbeta
