#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "robust_sysid/io.hpp"
#include "robust_sysid/plot.hpp"

using namespace robust_sysid;

namespace {

std::vector<ErrorCurveRow> sample_curve() {
  std::vector<ErrorCurveRow> rows;
  for (int trial = 0; trial < 3; ++trial) {
    for (int t : {4, 8, 12}) {
      rows.push_back(ErrorCurveRow{trial, t, "lasso",
                                   std::pow(10.0, -t / 4.0) * (trial + 1),
                                   1.0, true, 7});
      rows.push_back(ErrorCurveRow{trial, t, "least_squares",
                                   0.5 * (trial + 1), 1.0, true, 7});
    }
  }
  return rows;
}

std::vector<CertificationRow> sample_cert() {
  std::vector<CertificationRow> rows;
  for (int trial = 0; trial < 4; ++trial) {
    rows.push_back(CertificationRow{trial, 0, 20, "singular_value", true, 0.0, 1});
    rows.push_back(
        CertificationRow{trial, 5, 20, trial == 0 ? "error" : "singular_value",
                         trial % 2 == 1, 0.4, 1});
    rows.push_back(CertificationRow{trial, 20, 20, "none", false,
                                    std::numeric_limits<double>::quiet_NaN(),
                                    1});
  }
  return rows;
}

}  // namespace

TEST_CASE("error curve SVG is deterministic and well formed") {
  const std::vector<ErrorCurveRow> rows = sample_curve();
  const std::string svg = render_error_curve_svg(rows);
  CHECK(svg == render_error_curve_svg(rows));
  CHECK(svg.rfind("<svg xmlns=", 0) == 0);
  CHECK(svg.find("</svg>\n") != std::string::npos);
  CHECK(svg.find(">lasso</text>") != std::string::npos);
  CHECK(svg.find(">least_squares</text>") != std::string::npos);
  CHECK(svg.find("estimation error") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("error curve SVG skips non-finite rows but needs at least one point") {
  std::vector<ErrorCurveRow> rows = sample_curve();
  rows.push_back(ErrorCurveRow{9, 4, "least_squares",
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), false,
                               1});
  const std::string svg = render_error_curve_svg(rows);  // must not throw
  CHECK(svg.find("</svg>") != std::string::npos);

  std::vector<ErrorCurveRow> hopeless;
  hopeless.push_back(ErrorCurveRow{0, 4, "lasso",
                                   std::numeric_limits<double>::quiet_NaN(),
                                   0.0, false, 1});
  CHECK_THROWS_WITH_AS(render_error_curve_svg(hopeless),
                       doctest::Contains("no plottable rows"), IoError);
  CHECK_THROWS_AS(render_error_curve_svg({}), IoError);
}

TEST_CASE("certification SVG is deterministic, errors count as uncertified") {
  const std::vector<CertificationRow> rows = sample_cert();
  const std::string svg = render_certification_svg(rows);
  CHECK(svg == render_certification_svg(rows));
  CHECK(svg.rfind("<svg xmlns=", 0) == 0);
  CHECK(svg.find("</svg>\n") != std::string::npos);

  // |S| = 0 is always certified, |S| = horizon never: both extremes must
  // be plotted (three distinct x positions -> at least three markers).
  CHECK(svg.find("<circle") != std::string::npos);

  CHECK_THROWS_WITH_AS(render_certification_svg({}),
                       doctest::Contains("empty sweep"), IoError);
}
