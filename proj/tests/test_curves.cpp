#include <doctest.h>

#include <cstdlib>
#include <string>

#include "hms/curves.hpp"
#include "hms/io.hpp"
#include "hms/series.hpp"

using namespace hms;

namespace {

std::string data_dir() {
  const char* d = std::getenv("HMS_DATA_DIR");
  REQUIRE(d != nullptr);
  return d;
}

doctest::Approx tight(double v) {
  return doctest::Approx(v).epsilon(1e-13);
}

} // namespace

TEST_CASE("two-point tables interpolate linearly") {
  MonotoneCurve c({0.0, 2.0}, {1.0, 5.0});
  CHECK(c.value(0.0) == 1.0);
  CHECK(c.value(2.0) == 5.0);
  CHECK(c.value(0.5) == doctest::Approx(2.0));
  CHECK(c.deriv(1.3) == doctest::Approx(2.0));
}

TEST_CASE("breakpoints are reproduced exactly") {
  std::vector<double> x{-1.0, 0.0, 0.25, 1.0, 3.0};
  std::vector<double> y{0.0, 0.5, 0.6, 2.0, 2.5};
  MonotoneCurve c(x, y);
  for (size_t i = 0; i < x.size(); ++i) CHECK(c.value(x[i]) == y[i]);
  CHECK(c.x_min() == -1.0);
  CHECK(c.x_max() == 3.0);
  CHECK(c.size() == 5);
}

TEST_CASE("interpolation of non-decreasing data never overshoots") {
  MonotoneCurve c({0, 1, 2, 3, 4}, {0, 0.1, 0.2, 5.0, 5.1});
  for (double q = 0.0; q <= 4.0; q += 1.0 / 64) {
    CHECK(c.value(q) >= 0.0);
    CHECK(c.value(q) <= 5.1);
    CHECK(c.deriv(q) >= 0.0);
  }
}

TEST_CASE("tabulated storage curve matches the reference interpolant") {
  MonotoneCurve h = load_curve_csv(data_dir() + "/brick_h.csv", "brick.h");
  // frozen from scipy.interpolate.PchipInterpolator on the same table
  CHECK(h.value(0.37) == tight(0.044161213911972926));
  CHECK(h.deriv(0.37) == tight(0.16683746793885287));
  CHECK(h.value(0.62) == tight(0.10120551334379906));
  CHECK(h.deriv(0.62) == tight(0.31205463108320197));
  CHECK(h.value(0.978) == tight(0.3381268327619047));
  CHECK(h.deriv(0.978) == tight(1.4181010364873232));
  CHECK(h.value(0.0) == 0.0);
}

TEST_CASE("tabulated saturation pressure matches the reference interpolant") {
  MonotoneCurve ps = load_curve_csv(data_dir() + "/magnus_ps.csv", "p_s");
  CHECK(ps.value(276.9) == tight(798.2144302681555));
  CHECK(ps.deriv(276.9) == tight(57.07989400527561));
  CHECK(ps.value(293.15) == tight(2333.4406230993577));
  CHECK(ps.deriv(293.15) == tight(143.32110343459593));
  CHECK(ps.value(307.3) == tight(5359.296379070234));
  CHECK(ps.deriv(307.3) == tight(298.36744783106417));
}

TEST_CASE("locally linear knots pin the slope exactly") {
  // collinear triple around zero: the limited slope there is exactly one
  MonotoneCurve g = load_curve_csv(data_dir() + "/mortar_g.csv", "mortar.g");
  CHECK(g.value(0.0) == 0.0);
  CHECK(g.deriv(0.0) == 1.0);
}

TEST_CASE("queries outside the table raise OutOfDomain") {
  MonotoneCurve c({0.0, 1.0}, {0.0, 1.0}, "unit");
  for (double bad : {-0.001, 1.001}) {
    try {
      c.value(bad);
      FAIL("expected OutOfDomain");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfDomain);
      CHECK(std::string(e.what()).find("unit") != std::string::npos);
    }
  }
}

TEST_CASE("curve construction validates its table") {
  try {
    MonotoneCurve c({0.0, 0.0, 1.0}, {0.0, 0.5, 1.0});
    FAIL("expected NonMonotoneData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneData);
  }
  try {
    MonotoneCurve c({0.0, 1.0, 2.0}, {0.0, 0.5, 0.4});
    FAIL("expected NonMonotoneData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneData);
  }
  try {
    MonotoneCurve c({0.0}, {1.0});
    FAIL("expected BadTable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadTable);
  }
}

TEST_CASE("bilinear surface reproduces corners and the frozen midpoint") {
  Surface2 lam = load_surface_csv(data_dir() + "/brick_lambda.csv", "brick.lambda");
  CHECK(lam.value(0.123, 291.7) == tight(0.7133366969999999));
  CHECK(lam.m_min() == -0.30);
  CHECK(lam.m_max() == 4.50);
  CHECK(lam.t_min() == 123.15);
  CHECK(lam.t_max() == 473.15);
}

TEST_CASE("surface interpolation is exact on bilinear data") {
  // tabulate v = 2 + 3 m + 0.5 t + 0.25 m t; bilinear interpolation is exact
  std::vector<double> ms{0.0, 0.5, 2.0};
  std::vector<double> ts{1.0, 2.0, 4.0};
  std::vector<std::vector<double>> v;
  for (double m : ms) {
    v.push_back({});
    for (double t : ts) v.back().push_back(2.0 + 3.0 * m + 0.5 * t + 0.25 * m * t);
  }
  Surface2 s(ms, ts, v);
  for (double m : {0.1, 0.49, 1.7})
    for (double t : {1.2, 2.0, 3.9})
      CHECK(s.value(m, t) == doctest::Approx(2.0 + 3.0 * m + 0.5 * t + 0.25 * m * t));
}

TEST_CASE("surface construction validates grid and positivity") {
  std::vector<double> ax{0.0, 1.0};
  try {
    Surface2 s(ax, ax, {{1.0, 2.0}, {3.0, 0.0}});
    FAIL("expected BadTable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadTable); // zero value
  }
  try {
    Surface2 s({1.0, 0.5}, ax, {{1.0, 2.0}, {3.0, 4.0}});
    FAIL("expected NonMonotoneData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneData);
  }
  try {
    Surface2 s(ax, ax, {{1.0, 2.0}});
    FAIL("expected BadTable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadTable); // row count mismatch
  }
  try {
    Surface2 s(ax, ax, {{1.0, 2.0}, {3.0}});
    FAIL("expected BadTable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadTable); // ragged row
  }
}

TEST_CASE("surface queries outside the grid raise OutOfDomain") {
  Surface2 s({0.0, 1.0}, {0.0, 1.0}, {{1.0, 2.0}, {3.0, 4.0}}, "grid");
  CHECK(s.value(0.5, 0.5) == doctest::Approx(2.5));
  for (auto [m, t] : {std::pair{-0.1, 0.5}, {1.1, 0.5}, {0.5, -0.1}, {0.5, 1.1}}) {
    try {
      s.value(m, t);
      FAIL("expected OutOfDomain");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfDomain);
    }
  }
}

TEST_CASE("climate series interpolates linearly and clamps beyond the record") {
  ClimateSeries cs({0.0, 10.0, 30.0}, {280.0, 290.0, 270.0}, {0.5, 0.7, 0.9});
  CHECK(cs.value(0.0)[0] == 280.0);
  CHECK(cs.value(5.0)[0] == doctest::Approx(285.0));
  CHECK(cs.value(5.0)[1] == doctest::Approx(0.6));
  CHECK(cs.value(20.0)[0] == doctest::Approx(280.0));
  // constant extension outside the record
  CHECK(cs.value(-3.0)[0] == 280.0);
  CHECK(cs.value(99.0)[0] == 270.0);
  CHECK(cs.value(99.0)[1] == 0.9);
  CHECK(cs.t_min() == 0.0);
  CHECK(cs.t_max() == 30.0);
}

TEST_CASE("climate series validates its time axis") {
  try {
    ClimateSeries cs({0.0, 0.0}, {1.0, 2.0}, {3.0, 4.0});
    FAIL("expected NonMonotoneTime");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneTime);
  }
  try {
    ClimateSeries cs({0.0, 1.0}, {1.0}, {3.0, 4.0});
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
  }
}
