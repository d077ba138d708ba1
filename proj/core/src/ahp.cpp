#include "softbody/ahp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string_view>

#include "softbody/error.hpp"

namespace softbody::ahp {
namespace {

constexpr double kReciprocalTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "bad matrix cell '" + std::string(s) + "'");
  }
  return v;
}

double parse_cell(std::string_view cell) {
  const auto slash = cell.find('/');
  if (slash == std::string_view::npos) return parse_number(cell);
  return parse_number(cell.substr(0, slash)) / parse_number(cell.substr(slash + 1));
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void validate(const ComparisonMatrix& m) {
  const std::size_t n = m.labels.size();
  if (n == 0 || m.entries.size() != n) {
    throw Error(ErrorCode::NotSquare, "matrix must have one row per label");
  }
  for (const auto& row : m.entries) {
    if (row.size() != n) throw Error(ErrorCode::NotSquare, "matrix rows must have one entry per label");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = m.entries[i][j];
      if (!(std::isfinite(a) && a > 0.0)) {
        throw Error(ErrorCode::NonPositiveEntry,
                    "entry (" + m.labels[i] + ", " + m.labels[j] + ") must be positive");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(m.entries[i][i] - 1.0) > kReciprocalTolerance) {
      throw Error(ErrorCode::NotReciprocal, "diagonal entry for " + m.labels[i] + " must be 1");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      // a_ji * a_ij == 1, checked relative to 1
      if (std::abs(m.entries[i][j] * m.entries[j][i] - 1.0) > kReciprocalTolerance) {
        throw Error(ErrorCode::NotReciprocal,
                    "entries (" + m.labels[i] + ", " + m.labels[j] + ") and (" + m.labels[j] +
                        ", " + m.labels[i] + ") are not reciprocal");
      }
    }
  }
}

std::vector<std::vector<double>> normalize(const ComparisonMatrix& m) {
  validate(m);
  const std::size_t n = m.size();
  std::vector<double> column_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) column_sum[j] += m.entries[i][j];
  }
  auto out = m.entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] /= column_sum[j];
  }
  return out;
}

PriorityVector priority_vector(const ComparisonMatrix& m) {
  const auto normalized = normalize(m);
  PriorityVector pv;
  pv.labels = m.labels;
  for (const auto& row : normalized) {
    double sum = 0.0;
    for (double v : row) sum += v;
    pv.weights.push_back(sum / static_cast<double>(row.size()));
  }
  return pv;
}

std::vector<CostValuePoint> cost_value_points(const PriorityVector& value, const PriorityVector& cost) {
  const std::set<std::string> value_labels(value.labels.begin(), value.labels.end());
  const std::set<std::string> cost_labels(cost.labels.begin(), cost.labels.end());
  if (value_labels != cost_labels || value.labels.size() != cost.labels.size()) {
    throw Error(ErrorCode::LabelMismatch, "value and cost matrices must rank the same requirements");
  }
  std::vector<CostValuePoint> points;
  for (std::size_t i = 0; i < value.labels.size(); ++i) {
    std::size_t j = 0;
    while (cost.labels[j] != value.labels[i]) ++j;
    points.push_back({value.labels[i], value.weights[i], cost.weights[j]});
  }
  return points;
}

ComparisonMatrix read_matrix_csv(std::istream& in) {
  ComparisonMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty matrix file");
  const auto header = split_csv(line);
  for (std::size_t j = 1; j < header.size(); ++j) m.labels.emplace_back(header[j]);

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != m.labels.size() + 1) {
      throw Error(ErrorCode::NotSquare, "row '" + std::string(cells.front()) + "' has the wrong width");
    }
    const std::size_t row = m.entries.size();
    if (row >= m.labels.size() || cells.front() != m.labels[row]) {
      throw Error(ErrorCode::NotSquare, "row labels must match the column labels in order");
    }
    std::vector<double> values;
    for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(parse_cell(cells[j]));
    m.entries.push_back(std::move(values));
  }
  return m;
}

ComparisonMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_matrix_csv(in);
}

void write_points_csv(const std::vector<CostValuePoint>& points, std::ostream& out, int decimals) {
  std::ostringstream buf;
  buf << "label,cost,value\n" << std::fixed << std::setprecision(decimals);
  for (const auto& p : points) buf << p.label << ',' << p.cost << ',' << p.value << '\n';
  out << buf.str();
}

}  // namespace softbody::ahp
