#include "gridpanel/displacement.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gridpanel/errors.hpp"

namespace gridpanel {

const char* resource_name(Resource resource) {
  return resource == Resource::Solar ? "solar" : "wind";
}

Resource parse_resource(std::string_view name) {
  if (name == "solar") return Resource::Solar;
  if (name == "wind") return Resource::Wind;
  throw ConfigError("unknown resource '" + std::string(name) + "' (expected solar or wind)");
}

DisplacementReport displacement_fraction(double beta_emissions, double beta_intensity) {
  if (!(std::isfinite(beta_emissions) && std::isfinite(beta_intensity))) {
    throw DomainError("displacement fraction needs finite coefficients");
  }
  if (beta_emissions == beta_intensity) {
    throw DomainError("displacement fraction undefined: emissions and intensity coefficients "
                      "are equal, so the denominator is zero");
  }
  DisplacementReport report;
  report.beta_emissions = beta_emissions;
  report.beta_intensity = beta_intensity;
  report.fraction = beta_emissions / (beta_emissions - beta_intensity);
  report.implied_generation_response = beta_intensity - beta_emissions;
  report.fraction_se = std::nan("");
  report.fraction_ci_low = std::nan("");
  report.fraction_ci_high = std::nan("");
  return report;
}

DisplacementReport displacement_report(const FitResult& emissions_fit,
                                       const FitResult& intensity_fit, Resource resource) {
  if (emissions_fit.dependent != Dependent::Emissions) {
    throw IntegrityError("first fit must model emissions, got " +
                         std::string(dependent_name(emissions_fit.dependent)));
  }
  if (intensity_fit.dependent != Dependent::Intensity) {
    throw IntegrityError("second fit must model intensity, got " +
                         std::string(dependent_name(intensity_fit.dependent)));
  }
  if (emissions_fit.skipped || intensity_fit.skipped) {
    throw IntegrityError("cannot build a displacement report from a skipped fit");
  }
  if (emissions_fit.spec_id != intensity_fit.spec_id) {
    throw IntegrityError("fits disagree on specification: " + emissions_fit.spec_id + " vs " +
                         intensity_fit.spec_id);
  }
  if (emissions_fit.region != intensity_fit.region) {
    throw IntegrityError("fits disagree on region: " + emissions_fit.region + " vs " +
                         intensity_fit.region);
  }
  if (emissions_fit.plant_id != intensity_fit.plant_id) {
    throw IntegrityError("fits disagree on plant: '" + emissions_fit.plant_id + "' vs '" +
                         intensity_fit.plant_id + "'");
  }
  if (emissions_fit.n_obs != intensity_fit.n_obs) {
    throw IntegrityError("fits disagree on row count: " + std::to_string(emissions_fit.n_obs) +
                         " vs " + std::to_string(intensity_fit.n_obs) +
                         "; they must be estimated on the same rows");
  }

  const std::string name = resource_name(resource);
  const auto beta_em = emissions_fit.coefficient(name);
  const auto beta_ei = intensity_fit.coefficient(name);
  if (!beta_em || !beta_ei) {
    throw ConfigError("specification " + emissions_fit.spec_id + " does not estimate a " + name +
                      " coefficient in both fits");
  }

  DisplacementReport report = displacement_fraction(*beta_em, *beta_ei);
  report.region = emissions_fit.region;
  report.spec_id = emissions_fit.spec_id;
  report.resource = resource;
  report.se_emissions = emissions_fit.std_error(name).value_or(std::nan(""));
  report.se_intensity = intensity_fit.std_error(name).value_or(std::nan(""));
  report.n_obs = emissions_fit.n_obs;

  // First-order propagation of f = b' / (b' - b) with independent estimates:
  // Var(f) = (b^2 Var(b') + b'^2 Var(b)) / (b' - b)^4.
  const double diff = *beta_em - *beta_ei;
  const double var = (*beta_ei * *beta_ei * report.se_emissions * report.se_emissions +
                      *beta_em * *beta_em * report.se_intensity * report.se_intensity) /
                     (diff * diff * diff * diff);
  report.fraction_se = std::sqrt(var);
  constexpr double kZ975 = 1.959963984540054;
  report.fraction_ci_low = report.fraction - kZ975 * report.fraction_se;
  report.fraction_ci_high = report.fraction + kZ975 * report.fraction_se;
  return report;
}

void write_displacement_json(std::span<const DisplacementReport> reports,
                             const std::filesystem::path& path) {
  nlohmann::ordered_json body = nlohmann::ordered_json::object();
  for (const DisplacementReport& r : reports) {
    const std::string key = r.region + ":" + resource_name(r.resource) + ":" + r.spec_id;
    nlohmann::ordered_json item;
    item["region"] = r.region;
    item["resource"] = resource_name(r.resource);
    item["spec_id"] = r.spec_id;
    item["beta_emissions"] = r.beta_emissions;
    item["beta_intensity"] = r.beta_intensity;
    item["se_emissions"] = r.se_emissions;
    item["se_intensity"] = r.se_intensity;
    item["fraction"] = r.fraction;
    item["implied_generation_response"] = r.implied_generation_response;
    item["fraction_se"] = r.fraction_se;
    item["fraction_ci_low"] = r.fraction_ci_low;
    item["fraction_ci_high"] = r.fraction_ci_high;
    item["n_obs"] = r.n_obs;
    item["uncertainty_note"] =
        "delta-method interval assuming independent coefficient estimates; the two fits share "
        "rows, so treat it as approximate";
    body[key] = std::move(item);
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << body.dump(2) << '\n';
  if (!out.good()) throw IoError("failed writing " + path.string());
}

}  // namespace gridpanel
