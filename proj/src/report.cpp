#include "blockbeta/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace blockbeta {

Check& Report::add(std::string name, double value, double reference, double statistic, bool pass,
                   std::string note) {
    checks.push_back({std::move(name), value, reference, statistic, pass, std::move(note)});
    return checks.back();
}

Check& Report::info(std::string name, double value, double reference, double statistic, bool pass,
                    std::string note) {
    Check& c = add(std::move(name), value, reference, statistic, pass, std::move(note));
    c.counted = false;
    return c;
}

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.counted && !c.pass; }));
}

double Report::worst_statistic(const std::string& prefix) const {
    double worst = 0.0;
    for (const auto& c : checks)
        if (c.name.rfind(prefix, 0) == 0 && std::isfinite(c.statistic)) worst = std::max(worst, std::abs(c.statistic));
    return worst;
}

void Report::merge(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

std::string Report::str() const {
    std::string out = "# " + title + "\n";
    char buf[512];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%-48s value=%-14.8g reference=%-14.8g stat=%-10.4g %s", c.name.c_str(), c.value,
                      c.reference, c.statistic, c.counted ? (c.pass ? "PASS" : "FAIL") : (c.pass ? "info" : "info*"));
        out += buf;
        if (!c.note.empty()) out += "  " + c.note;
        out += '\n';
    }
    std::snprintf(buf, sizeof buf, "# %zu checks, %zu failed\n", checks.size(), failures());
    out += buf;
    return out;
}

}  // namespace blockbeta
