#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <vector>

#include "gridpanel/displacement.hpp"
#include "gridpanel/errors.hpp"
#include "gridpanel/fit.hpp"
#include "testutil.hpp"

using namespace gridpanel;

namespace {

FitResult paired_fit(Dependent dep, double wind_coef, double wind_se,
                     const std::string& spec = "M1", const std::string& region = "ERCOT",
                     std::int64_t n_obs = 5000) {
  FitResult f;
  f.spec_id = spec;
  f.dependent = dep;
  f.region = region;
  f.regressor_names = {"wind"};
  f.coefficients = Eigen::VectorXd::Constant(1, wind_coef);
  f.std_errors = Eigen::VectorXd::Constant(1, wind_se);
  f.n_obs = n_obs;
  return f;
}

}  // namespace

TEST_CASE("displacement fraction arithmetic") {
  // -0.20 / (-0.20 - 0.05) = 0.8 with no rounding slack
  DisplacementReport r = displacement_fraction(-0.20, 0.05);
  CHECK(r.fraction == 0.8);
  CHECK(r.implied_generation_response == 0.25);
  CHECK(std::isnan(r.fraction_se));
  CHECK(std::isnan(r.fraction_ci_low));

  // a zero intensity response means every avoided MWh displaced emissions
  CHECK(displacement_fraction(-0.30, 0.0).fraction == 1.0);

  CHECK(std::abs(displacement_fraction(-0.21, 0.02).fraction - 0.913) < 0.001);
  CHECK(std::abs(displacement_fraction(-0.19, 0.01).fraction - 0.950) < 0.001);
  CHECK(std::abs(displacement_fraction(-0.31, 0.03).fraction - 0.912) < 0.001);
}

TEST_CASE("fraction and its complement split the response exactly on dyadic inputs") {
  for (auto [em, ei] : std::vector<std::pair<double, double>>{{-0.25, 0.25}, {-0.5, 0.75}}) {
    DisplacementReport r = displacement_fraction(em, ei);
    CHECK(1.0 - r.fraction == -ei / (em - ei));
  }

  DisplacementReport general = displacement_fraction(-0.21, 0.02);
  const double complement = -0.02 / (-0.21 - 0.02);
  CHECK(std::abs((1.0 - general.fraction) - complement) <= 3e-16);
}

TEST_CASE("fraction is invariant to a common rescale of both coefficients") {
  DisplacementReport base = displacement_fraction(-0.19, 0.01);
  for (double c : {2.0, 0.25, -4.0}) {
    CHECK(displacement_fraction(c * -0.19, c * 0.01).fraction == base.fraction);
  }
  CHECK(displacement_fraction(3.0 * -0.19, 3.0 * 0.01).fraction ==
        doctest::Approx(base.fraction).epsilon(1e-15));
}

TEST_CASE("fraction falls as the intensity response grows") {
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 10; ++k) {
    const double ei = 0.01 * k;
    const double f = displacement_fraction(-0.2, ei).fraction;
    CHECK(f < prev);
    prev = f;
  }
  CHECK(displacement_fraction(-0.2, 0.0).fraction == 1.0);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(displacement_fraction(-0.2, -0.2), DomainError);
  CHECK_THROWS_AS(displacement_fraction(std::nan(""), 0.1), DomainError);
  CHECK_THROWS_AS(displacement_fraction(-0.2, std::numeric_limits<double>::infinity()),
                  DomainError);
}

TEST_CASE("paired-fit report carries coefficients and delta-method uncertainty") {
  FitResult em = paired_fit(Dependent::Emissions, -0.31, 0.03);
  FitResult ei = paired_fit(Dependent::Intensity, 0.03, 0.01);

  DisplacementReport r = displacement_report(em, ei, Resource::Wind);
  CHECK(r.region == "ERCOT");
  CHECK(r.spec_id == "M1");
  CHECK(r.resource == Resource::Wind);
  CHECK(r.beta_emissions == -0.31);
  CHECK(r.beta_intensity == 0.03);
  CHECK(r.se_emissions == 0.03);
  CHECK(r.se_intensity == 0.01);
  CHECK(r.n_obs == 5000);
  CHECK(r.fraction == doctest::Approx(-0.31 / (-0.31 - 0.03)).epsilon(1e-15));
  CHECK(r.implied_generation_response == doctest::Approx(0.34).epsilon(1e-15));

  const double diff = -0.31 - 0.03;
  const double var =
      (0.03 * 0.03 * 0.03 * 0.03 + 0.31 * 0.31 * 0.01 * 0.01) / (diff * diff * diff * diff);
  CHECK(r.fraction_se == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  CHECK(r.fraction_ci_low < r.fraction);
  CHECK(r.fraction_ci_high > r.fraction);
  CHECK(r.fraction - r.fraction_ci_low ==
        doctest::Approx(1.959963984540054 * r.fraction_se).epsilon(1e-12));
  CHECK(r.fraction_ci_high - r.fraction ==
        doctest::Approx(1.959963984540054 * r.fraction_se).epsilon(1e-12));
}

TEST_CASE("report rejects mismatched fit pairs") {
  FitResult em = paired_fit(Dependent::Emissions, -0.31, 0.03);
  FitResult ei = paired_fit(Dependent::Intensity, 0.03, 0.01);

  CHECK_THROWS_AS(displacement_report(ei, em, Resource::Wind), IntegrityError);

  FitResult wrong_spec = ei;
  wrong_spec.spec_id = "M2";
  CHECK_THROWS_AS(displacement_report(em, wrong_spec, Resource::Wind), IntegrityError);

  FitResult wrong_region = ei;
  wrong_region.region = "CAISO";
  CHECK_THROWS_AS(displacement_report(em, wrong_region, Resource::Wind), IntegrityError);

  FitResult wrong_plant = ei;
  wrong_plant.plant_id = "P1";
  CHECK_THROWS_AS(displacement_report(em, wrong_plant, Resource::Wind), IntegrityError);

  FitResult wrong_rows = ei;
  wrong_rows.n_obs = 4999;
  CHECK_THROWS_AS(displacement_report(em, wrong_rows, Resource::Wind), IntegrityError);

  FitResult skipped = ei;
  skipped.skipped = true;
  CHECK_THROWS_AS(displacement_report(em, skipped, Resource::Wind), IntegrityError);

  // neither fit estimates a solar coefficient
  CHECK_THROWS_AS(displacement_report(em, ei, Resource::Solar), ConfigError);
}

TEST_CASE("displacement JSON keys reports by region, resource, and spec") {
  FitResult em = paired_fit(Dependent::Emissions, -0.31, 0.03);
  FitResult ei = paired_fit(Dependent::Intensity, 0.03, 0.01);
  DisplacementReport wind = displacement_report(em, ei, Resource::Wind);

  FitResult em2 = paired_fit(Dependent::Emissions, -0.21, 0.02, "M2", "CAISO");
  FitResult ei2 = paired_fit(Dependent::Intensity, 0.02, 0.01, "M2", "CAISO");
  em2.regressor_names = {"solar"};
  ei2.regressor_names = {"solar"};
  DisplacementReport solar = displacement_report(em2, ei2, Resource::Solar);

  auto dir = testutil::scratch_dir("displacement_json");
  const auto path = dir / "displacement.json";
  std::vector<DisplacementReport> reports = {wind, solar};
  write_displacement_json(reports, path);

  nlohmann::json j = nlohmann::json::parse(testutil::read_file(path));
  REQUIRE(j.contains("ERCOT:wind:M1"));
  REQUIRE(j.contains("CAISO:solar:M2"));
  const auto& w = j.at("ERCOT:wind:M1");
  CHECK(w.at("fraction").get<double>() == wind.fraction);
  CHECK(w.at("beta_emissions").get<double>() == -0.31);
  CHECK(w.at("n_obs").get<std::int64_t>() == 5000);
  CHECK_FALSE(w.at("uncertainty_note").get<std::string>().empty());
  CHECK(j.at("CAISO:solar:M2").at("resource").get<std::string>() == "solar");
}

TEST_CASE("resource names parse both ways") {
  CHECK(parse_resource("solar") == Resource::Solar);
  CHECK(parse_resource("wind") == Resource::Wind);
  CHECK(resource_name(Resource::Wind) == std::string("wind"));
  CHECK_THROWS_AS(parse_resource("hydro"), ConfigError);
}
