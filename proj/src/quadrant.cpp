#include "citegraph/quadrant.hpp"

#include <algorithm>
#include <stdexcept>

#include "citegraph/error.hpp"

namespace citegraph {

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::LowLow: return "low_low";
    case Quadrant::LowHigh: return "low_high";
    case Quadrant::HighLow: return "high_low";
    case Quadrant::HighHigh: return "high_high";
  }
  return "?";
}

namespace {
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

QuadrantAssignment assign_quadrants(const std::vector<Edge>& edges, const Matrix& network_emb,
                                    const Matrix& topic_emb,
                                    std::optional<std::pair<double, double>> thresholds) {
  if (edges.empty()) throw ConfigError("assign_quadrants: empty edge list");
  QuadrantAssignment out;
  out.network_distance.reserve(edges.size());
  out.topic_distance.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= network_emb.rows() || v >= network_emb.rows() || u >= topic_emb.rows() ||
        v >= topic_emb.rows()) {
      throw ConfigError("assign_quadrants: edge endpoint outside embedding matrix");
    }
    out.network_distance.push_back(cosine_distance(network_emb.row(u), network_emb.row(v)));
    out.topic_distance.push_back(cosine_distance(topic_emb.row(u), topic_emb.row(v)));
  }

  if (thresholds.has_value()) {
    out.network_threshold = thresholds->first;
    out.topic_threshold = thresholds->second;
  } else {
    out.network_threshold = median(out.network_distance);
    out.topic_threshold = median(out.topic_distance);
  }

  out.quadrant.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const bool net_high = out.network_distance[i] >= out.network_threshold;
    const bool topic_high = out.topic_distance[i] >= out.topic_threshold;
    out.quadrant.push_back(static_cast<Quadrant>((net_high ? 2 : 0) + (topic_high ? 1 : 0)));
  }
  return out;
}

}  // namespace citegraph
