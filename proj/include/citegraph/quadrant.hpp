#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "citegraph/graph.hpp"
#include "citegraph/matrix.hpp"

namespace citegraph {

// Citation-distance quadrant. First axis is network distance (structure
// embedding cosine), second is topic distance (content embedding cosine).
// HighHigh is the interdisciplinary region.
enum class Quadrant : std::uint8_t { LowLow = 0, LowHigh = 1, HighLow = 2, HighHigh = 3 };

inline constexpr std::size_t kNumQuadrants = 4;
std::string to_string(Quadrant q);

struct QuadrantAssignment {
  std::vector<double> network_distance;  // parallel to the input edge list
  std::vector<double> topic_distance;
  std::vector<Quadrant> quadrant;
  double network_threshold = 0.0;
  double topic_threshold = 0.0;
};

// Distances are cosine distances between endpoint rows of the two embedding
// matrices. Thresholds default to the per-axis median over all given edges;
// a distance >= threshold is High on that axis (ties at the median go High).
QuadrantAssignment assign_quadrants(const std::vector<Edge>& edges, const Matrix& network_emb,
                                    const Matrix& topic_emb,
                                    std::optional<std::pair<double, double>> thresholds);

}  // namespace citegraph
