#pragma once

#include <string>
#include <vector>

namespace blockbeta {

/// One line of a verification report.
struct Check {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double statistic = 0.0;  // z-score, slope, ratio ... depending on the check
    bool pass = false;
    std::string note;
    bool counted = true;  // informational lines do not affect passed()
};

struct Report {
    std::string title;
    std::vector<Check> checks;

    Check& add(std::string name, double value, double reference, double statistic, bool pass, std::string note = {});
    Check& info(std::string name, double value, double reference, double statistic, bool pass, std::string note = {});
    bool passed() const;
    std::size_t failures() const;
    /// Largest |statistic| over checks whose name starts with `prefix` (all if empty).
    double worst_statistic(const std::string& prefix = {}) const;
    void merge(const Report& other);
    /// Header line, one line per check, summary line.
    std::string str() const;
};

}  // namespace blockbeta
