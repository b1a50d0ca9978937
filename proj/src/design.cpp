#include "gridpanel/design.hpp"

#include <algorithm>

#include "gridpanel/errors.hpp"
#include "gridpanel/panel.hpp"

namespace gridpanel {

Dependent parse_dependent(std::string_view name) {
  if (name == "generation") return Dependent::Generation;
  if (name == "emissions") return Dependent::Emissions;
  if (name == "intensity") return Dependent::Intensity;
  throw ConfigError("unknown dependent '" + std::string(name) +
                    "' (expected generation, emissions, or intensity)");
}

std::string_view dependent_name(Dependent dep) {
  switch (dep) {
    case Dependent::Generation: return "generation";
    case Dependent::Emissions: return "emissions";
    case Dependent::Intensity: return "intensity";
  }
  return "generation";
}

DesignSpec make_design_spec(std::string_view id, Dependent dependent) {
  DesignSpec spec;
  spec.id = std::string(id);
  spec.dependent = dependent;
  spec.regressors = {kGThermal, kSolar,   kWind,  kWindRamp,   kSolarExt,
                     kWindExt,  kDemandExt, kHydro, kNetImports};

  auto erase = [&](int covariate) {
    spec.regressors.erase(std::remove(spec.regressors.begin(), spec.regressors.end(), covariate),
                          spec.regressors.end());
  };

  if (id == "M1") {
    // full specification
  } else if (id == "M2") {
    erase(kGThermal);
  } else if (id == "M3") {
    erase(kSolar);
  } else if (id == "M4") {
    erase(kWind);
  } else if (id == "M5") {
    erase(kSolarExt);
    erase(kWindExt);
    erase(kDemandExt);
  } else if (id == "M6") {
    spec.regressors[0] = kResidualDemand;
  } else if (id == "M7") {
    erase(kWindRamp);
  } else if (id == "M8") {
    spec.fe_month = false;
    spec.fe_year = false;
  } else if (id == "M9") {
    spec.fe_entity_month = false;
  } else {
    throw ConfigError("unknown specification '" + std::string(id) + "' (expected M1..M9)");
  }
  return spec;
}

const std::vector<std::string>& all_spec_ids() {
  static const std::vector<std::string> ids{"M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9"};
  return ids;
}

DesignSpec hourly_variant(DesignSpec spec) {
  spec.fe_entity = false;
  spec.fe_entity_month = false;
  return spec;
}

}  // namespace gridpanel
