#include "citegraph/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "citegraph/version.hpp"

namespace citegraph {

using nlohmann::json;

namespace {

json metric_values_json(const MetricValues& m) {
  json j;
  for (std::size_t i = 0; i < kNumMetrics; ++i) j[kMetricNames[i]] = metric_by_index(m, i);
  return j;
}

json aggregate_json(const Aggregate& a) {
  json j;
  j["mean"] = std::isnan(a.mean) ? json() : json(a.mean);
  j["sd"] = std::isnan(a.sd) ? json() : json(a.sd);
  j["n"] = a.n;
  return j;
}

const char* region_name(std::size_t region) {
  static const char* names[] = {"overall", "low_low", "low_high", "high_low", "high_high"};
  return names[region];
}

}  // namespace

std::string metrics_report_json(const std::vector<MethodReport>& reports,
                                const EvalSettings& settings, std::uint64_t master_seed) {
  json root;
  root["schema_version"] = 1;
  root["tool_version"] = kVersion;
  root["master_seed"] = master_seed;
  root["eval"] = {{"test_frac", settings.test_frac},
                  {"val_frac", settings.val_frac},
                  {"repeats", settings.repeats}};
  if (settings.thresholds.has_value()) {
    root["eval"]["thresholds"] = {settings.thresholds->first, settings.thresholds->second};
  }

  json methods = json::array();
  for (const auto& report : reports) {
    json mj;
    mj["name"] = to_string(report.kind);

    json repeats = json::array();
    for (const auto& rep : report.repeats) {
      json rj;
      rj["overall"] = metric_values_json(rep.overall);
      json quadrants;
      for (std::size_t q = 0; q < kNumQuadrants; ++q) {
        const auto name = to_string(static_cast<Quadrant>(q));
        quadrants[name] =
            rep.quadrant[q].has_value() ? metric_values_json(*rep.quadrant[q]) : json();
        quadrants[name + "_counts"] = {{"pos", rep.quadrant_pos[q]}, {"neg", rep.quadrant_neg[q]}};
      }
      rj["quadrants"] = std::move(quadrants);
      rj["network_threshold"] = rep.network_threshold;
      rj["topic_threshold"] = rep.topic_threshold;
      rj["classifier_val_auc"] = rep.classifier_val_auc;
      repeats.push_back(std::move(rj));
    }
    mj["repeats"] = std::move(repeats);

    json summary;
    for (std::size_t region = 0; region < 1 + kNumQuadrants; ++region) {
      json region_json;
      for (std::size_t metric = 0; metric < kNumMetrics; ++metric) {
        region_json[kMetricNames[metric]] =
            aggregate_json(aggregate_metric(report.repeats, region, metric));
      }
      summary[region_name(region)] = std::move(region_json);
    }
    mj["summary"] = std::move(summary);

    if (!report.loss_traces.empty()) mj["train_loss"] = report.loss_traces;
    methods.push_back(std::move(mj));
  }
  root["methods"] = std::move(methods);
  return root.dump(2) + "\n";
}

std::string metrics_report_csv(const std::vector<MethodReport>& reports) {
  std::string out = "method,region,metric,mean,sd,n\n";
  char buf[256];
  for (const auto& report : reports) {
    for (std::size_t region = 0; region < 1 + kNumQuadrants; ++region) {
      for (std::size_t metric = 0; metric < kNumMetrics; ++metric) {
        const Aggregate a = aggregate_metric(report.repeats, region, metric);
        const int n = std::snprintf(buf, sizeof buf, "%s,%s,%s,%.10g,%.10g,%zu\n",
                                    to_string(report.kind).c_str(), region_name(region),
                                    kMetricNames[metric], a.mean, a.sd, a.n);
        out.append(buf, static_cast<std::size_t>(n));
      }
    }
  }
  return out;
}

}  // namespace citegraph
