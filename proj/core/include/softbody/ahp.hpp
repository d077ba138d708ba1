#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace softbody::ahp {

/// Reciprocal pairwise comparison matrix on the 1/3/5/7/9 scale.
struct ComparisonMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> entries;  // row-major, entries[i][j] = preference of i over j

  std::size_t size() const { return labels.size(); }
};

struct PriorityVector {
  std::vector<std::string> labels;
  std::vector<double> weights;  // sums to 1
};

struct CostValuePoint {
  std::string label;
  double value = 0.0;
  double cost = 0.0;
};

/// Throws NotSquare, NonPositiveEntry or NotReciprocal.
void validate(const ComparisonMatrix& matrix);

/// Each entry divided by its column sum.
std::vector<std::vector<double>> normalize(const ComparisonMatrix& matrix);

/// Row means of the normalized matrix.
PriorityVector priority_vector(const ComparisonMatrix& matrix);

/// Pairs each label's value weight with its cost weight. Throws LabelMismatch.
std::vector<CostValuePoint> cost_value_points(const PriorityVector& value, const PriorityVector& cost);

/// Parses a CSV matrix whose first row and first column carry labels. Cells may be
/// fractions such as "1/7" or "1 / 7".
ComparisonMatrix read_matrix_csv(std::istream& in);
ComparisonMatrix read_matrix_csv(const std::string& path);

/// `label,cost,value` with `decimals` digits after the point.
void write_points_csv(const std::vector<CostValuePoint>& points, std::ostream& out, int decimals = 2);

}  // namespace softbody::ahp
