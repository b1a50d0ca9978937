#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "gridpanel/fit.hpp"

namespace gridpanel {

enum class Resource { Solar, Wind };

const char* resource_name(Resource resource);           // "solar" / "wind"
Resource parse_resource(std::string_view name);         // throws ConfigError

// Expected-vs-actual displacement computed from a paired emissions fit and
// emissions-intensity fit of the same specification on the same rows.
struct DisplacementReport {
  std::string region;
  std::string spec_id;
  Resource resource = Resource::Solar;
  double beta_emissions = 0.0;   // resource coefficient, ln-emissions model
  double beta_intensity = 0.0;   // resource coefficient, ln-intensity model
  double se_emissions = 0.0;
  double se_intensity = 0.0;
  double fraction = 0.0;                      // beta_em / (beta_em - beta_int)
  double implied_generation_response = 0.0;   // beta_int - beta_em
  // Delta-method uncertainty treating the two coefficient estimates as
  // independent; they share rows, so this is a labeled approximation.
  double fraction_se = 0.0;
  double fraction_ci_low = 0.0;
  double fraction_ci_high = 0.0;
  std::int64_t n_obs = 0;
};

// Core arithmetic; throws DomainError when the two betas coincide (the
// fraction's denominator vanishes).
DisplacementReport displacement_fraction(double beta_emissions, double beta_intensity);

// Extracts the resource coefficient from each fit and attaches delta-method
// uncertainty. The fits must agree on spec id, region, and row count.
DisplacementReport displacement_report(const FitResult& emissions_fit,
                                       const FitResult& intensity_fit, Resource resource);

void write_displacement_json(std::span<const DisplacementReport> reports,
                             const std::filesystem::path& path);

}  // namespace gridpanel
