#include <doctest.h>

#include <cmath>
#include <sstream>

#include "softbody/ahp.hpp"
#include "softbody/error.hpp"

using namespace softbody;
using namespace softbody::ahp;

namespace {

const std::vector<std::string> kLabels{"DragObject",  "SaveSimulation", "ProcessIdleObjectStatus",
                                       "ChangeObjectDimension", "LinkObject", "CalculateTotalForces"};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected softbody::Error");
  return ErrorCode::InvalidArgument;
}

// Oracle: column sums, then row means, computed without the library.
std::vector<double> oracle_weights(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<double> col(n, 0.0), w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) col[j] += a[i][j];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i] += a[i][j] / col[j];
    w[i] /= static_cast<double>(n);
  }
  return w;
}

ComparisonMatrix load(const std::string& name) { return read_matrix_csv(std::string(SOFTBODY_DATA_DIR "/ahp/") + name); }

}  // namespace

TEST_CASE("matrix files hold the published comparisons") {
  const ComparisonMatrix value = load("value_matrix.csv");
  CHECK(value.labels == kLabels);
  CHECK(value.entries[0] == std::vector<double>{1, 5, 7, 9, 7, 7});
  CHECK(value.entries[3][5] == doctest::Approx(1.0 / 7));
  const ComparisonMatrix cost = load("cost_matrix.csv");
  CHECK(cost.entries[0] == std::vector<double>{1, 5, 5, 9, 7, 7});
  CHECK(cost.entries[5][4] == doctest::Approx(1.0 / 7));
}

TEST_CASE("priority vectors match the independent oracle") {
  for (const char* name : {"value_matrix.csv", "cost_matrix.csv"}) {
    const ComparisonMatrix m = load(name);
    const PriorityVector pv = priority_vector(m);
    const auto expected = oracle_weights(m.entries);
    double sum = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(pv.weights[i] == doctest::Approx(expected[i]).epsilon(1e-12));
      sum += pv.weights[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    const auto normalized = normalize(m);
    for (std::size_t j = 0; j < m.size(); ++j) {
      double column = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) column += normalized[i][j];
      CHECK(column == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("value weights match the published table") {
  const ComparisonMatrix m = load("value_matrix.csv");
  const PriorityVector pv = priority_vector(m);
  const double published[] = {0.45, 0.23, 0.14, 0.02, 0.09, 0.05};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(pv.weights[i] - published[i]) <= 0.01);
  CHECK(std::abs(normalize(m)[0][0] - 0.57) <= 0.005);
}

TEST_CASE("cost table normalized cell") {
  const ComparisonMatrix m = load("cost_matrix.csv");
  CHECK(std::abs(normalize(m)[0][0] - 0.56) <= 0.005);
  const PriorityVector pv = priority_vector(m);
  // Components whose published rounding agrees with the arithmetic.
  const double published[] = {0.40, 0.22, 0.16, 0.02, 0.11, 0.06};
  for (std::size_t i = 1; i < 6; ++i) CHECK(std::abs(pv.weights[i] - published[i]) <= 0.01);
}

TEST_CASE("uniform and permuted matrices") {
  ComparisonMatrix ones{{"a", "b", "c", "d"}, std::vector<std::vector<double>>(4, std::vector<double>(4, 1.0))};
  for (double w : priority_vector(ones).weights) CHECK(w == 0.25);

  const ComparisonMatrix m = load("value_matrix.csv");
  const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
  ComparisonMatrix p;
  p.entries.assign(6, std::vector<double>(6));
  for (std::size_t i = 0; i < 6; ++i) {
    p.labels.push_back(m.labels[perm[i]]);
    for (std::size_t j = 0; j < 6; ++j) p.entries[i][j] = m.entries[perm[i]][perm[j]];
  }
  const PriorityVector original = priority_vector(m), permuted = priority_vector(p);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(permuted.labels[i] == original.labels[perm[i]]);
    CHECK(permuted.weights[i] == doctest::Approx(original.weights[perm[i]]).epsilon(1e-12));
  }
}

TEST_CASE("validation") {
  ComparisonMatrix m{{"a", "b"}, {{1, 3}, {1.0 / 3, 1}}};
  CHECK_NOTHROW(validate(m));

  ComparisonMatrix not_recip = m;
  not_recip.entries[1][0] = 0.5;
  CHECK(code_of([&] { validate(not_recip); }) == ErrorCode::NotReciprocal);

  ComparisonMatrix bad_diagonal = m;
  bad_diagonal.entries[0][0] = 2;
  CHECK(code_of([&] { validate(bad_diagonal); }) == ErrorCode::NotReciprocal);

  ComparisonMatrix negative = m;
  negative.entries[0][1] = -3;
  CHECK(code_of([&] { validate(negative); }) == ErrorCode::NonPositiveEntry);

  ComparisonMatrix ragged{{"a", "b"}, {{1, 3}, {1.0 / 3}}};
  CHECK(code_of([&] { validate(ragged); }) == ErrorCode::NotSquare);
  CHECK(code_of([&] { priority_vector(not_recip); }) == ErrorCode::NotReciprocal);
}

TEST_CASE("CSV parsing") {
  std::istringstream ok(",x,y\nx,1,1 / 7\ny,7,1\n");
  const ComparisonMatrix m = read_matrix_csv(ok);
  CHECK(m.labels == std::vector<std::string>{"x", "y"});
  CHECK(m.entries[0][1] == doctest::Approx(1.0 / 7));

  std::istringstream swapped(",x,y\ny,1,7\nx,1/7,1\n");
  CHECK(code_of([&] { read_matrix_csv(swapped); }) == ErrorCode::NotSquare);
  std::istringstream garbage(",x,y\nx,1,seven\ny,7,1\n");
  CHECK(code_of([&] { read_matrix_csv(garbage); }) == ErrorCode::ParseError);
  CHECK(code_of([] { read_matrix_csv(std::string("/nonexistent/matrix.csv")); }) == ErrorCode::IoError);
}

TEST_CASE("cost-value points") {
  const PriorityVector value{{"a", "b"}, {0.75, 0.25}};
  const PriorityVector cost{{"a", "b"}, {0.4, 0.6}};
  const auto points = cost_value_points(value, cost);
  REQUIRE(points.size() == 2);
  CHECK(points[1].label == "b");
  CHECK(points[1].cost == 0.6);
  CHECK(points[1].value == 0.25);
  std::ostringstream out;
  write_points_csv(points, out);
  CHECK(out.str() == "label,cost,value\na,0.40,0.75\nb,0.60,0.25\n");

  const PriorityVector other{{"a", "c"}, {0.5, 0.5}};
  CHECK(code_of([&] { cost_value_points(value, other); }) == ErrorCode::LabelMismatch);
}
