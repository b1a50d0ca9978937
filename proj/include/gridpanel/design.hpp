#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gridpanel {

enum class Dependent { Generation, Emissions, Intensity };

Dependent parse_dependent(std::string_view name);  // throws ConfigError
std::string_view dependent_name(Dependent dep);

// One regression layout: dependent, ordered regressor subset (by covariate
// index), and which fixed-effect groups are absorbed.
struct DesignSpec {
  std::string id;
  Dependent dependent = Dependent::Generation;
  std::vector<int> regressors;
  bool fe_entity = true;
  bool fe_month = true;
  bool fe_year = true;
  bool fe_entity_month = true;  // entity x month-of-year interaction
};

// The nine daily-panel specifications:
//   M1 full; M2 drops thermal generation; M3 drops solar; M4 drops wind;
//   M5 drops the external-control block; M6 replaces thermal generation with
//   residual demand; M7 drops wind ramp; M8 drops the month and year effects;
//   M9 drops the entity x month interaction.
DesignSpec make_design_spec(std::string_view id, Dependent dependent);

const std::vector<std::string>& all_spec_ids();

// Hourly plant-level variant: single plant, so no entity effect and no
// entity x month interaction.
DesignSpec hourly_variant(DesignSpec spec);

}  // namespace gridpanel
