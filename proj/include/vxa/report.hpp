#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vxa/zhu.hpp"

namespace vxa {

// JSON document for a computed presentation (schema vxa-presentation/v1):
// level, cutoff, dims_per_weight, basis labels, structure constants with
// exact rational coordinates as strings.
std::string presentation_json(const Voa& voa, const Presentation& pres);

// RFC 4180 multiplication table: rows/columns are basis labels, entries the
// reduced coordinate strings (empty when a pair is outside the safe bound).
std::string presentation_csv(const Voa& voa, const Presentation& pres);

struct ReportMeta {
    std::vector<std::pair<std::string, std::string>> config;  // ordered echo
    bool with_timing = false;
    double seconds = 0.0;
};

// JSON verification report (schema vxa-report/v1). Deterministic given the
// config; timing is emitted only when requested.
std::string report_json(const ReportMeta& meta, const std::vector<CheckResult>& checks);

std::string csv_quote(const std::string& field);

}  // namespace vxa
