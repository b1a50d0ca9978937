#include "gridpanel/records.hpp"

#include <algorithm>
#include <cctype>

namespace gridpanel {

std::optional<Region> parse_region(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return char(std::toupper(c)); });
  if (upper == "CAISO") return Region::CAISO;
  if (upper == "ERCOT") return Region::ERCOT;
  if (upper == "OTHER") return Region::OTHER;
  return std::nullopt;
}

std::string_view region_name(Region region) {
  switch (region) {
    case Region::CAISO: return "CAISO";
    case Region::ERCOT: return "ERCOT";
    case Region::OTHER: return "OTHER";
  }
  return "OTHER";
}

std::optional<Fuel> parse_fuel(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  if (lower == "gas" || lower == "natural_gas" || lower == "natural gas" || lower == "ng") {
    return Fuel::NaturalGas;
  }
  if (lower == "coal") return Fuel::Coal;
  if (lower == "other" || lower == "oil" || lower == "biomass" || lower == "waste") {
    return Fuel::Other;
  }
  return std::nullopt;
}

std::string_view fuel_name(Fuel fuel) {
  switch (fuel) {
    case Fuel::NaturalGas: return "gas";
    case Fuel::Coal: return "coal";
    case Fuel::Other: return "other";
  }
  return "other";
}

}  // namespace gridpanel
