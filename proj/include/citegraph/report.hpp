#pragma once

#include <string>
#include <vector>

#include "citegraph/pipeline.hpp"

namespace citegraph {

// Full evaluation report: per-method, per-repeat raw metrics plus mean/sd
// summaries for the overall region and each quadrant.
std::string metrics_report_json(const std::vector<MethodReport>& reports,
                                const EvalSettings& settings, std::uint64_t master_seed);

// Flat table for external plotting: header line then exactly one data row
// per method x region (overall + 4 quadrants) x metric (5 metrics).
// Columns: method,region,metric,mean,sd,n
std::string metrics_report_csv(const std::vector<MethodReport>& reports);

}  // namespace citegraph
