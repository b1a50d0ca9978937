#include "gridpanel/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gridpanel/errors.hpp"
#include "gridpanel/stats.hpp"

namespace gridpanel {

namespace {

constexpr double kBinWidth = 0.05;
constexpr int kOverflowBin = 20;  // CF >= 1

int cf_bin(double cf) {
  const int k = int(std::floor(cf / kBinWidth));
  return k >= kOverflowBin ? kOverflowBin : k;
}

// First/last hour of `year` clipped to the dataset span, as series indices.
// Throws unless the span covers the whole year.
std::pair<Eigen::Index, Eigen::Index> year_index_range(const AlignedDataset& ds, int year) {
  const EpochDay y0 = day_from_civil({year, 1, 1});
  const EpochDay y1 = day_from_civil({year, 12, 31});
  if (y0 < ds.begin_day || y1 > ds.end_day) {
    throw DomainError("year " + std::to_string(year) + " is not fully covered by the dataset span");
  }
  const Eigen::Index lo = Eigen::Index(y0 - ds.begin_day) * 24;
  const Eigen::Index hi = Eigen::Index(y1 - ds.begin_day + 1) * 24;  // exclusive
  return {lo, hi};
}

}  // namespace

EiCfCurve ei_cf_curve(const PlantHourSeries& series) {
  EiCfCurve curve;
  curve.plant_id = series.plant_id;
  if (series.nameplate_mw <= 0.0) {
    throw DomainError("plant " + series.plant_id + ": nameplate_mw must be positive");
  }

  std::array<double, kOverflowBin + 1> bin_sum{};
  std::array<std::int64_t, kOverflowBin + 1> bin_count{};
  std::vector<double> cfs;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (!(series.generation_mwh[i] > 0.0)) continue;
    const double cf = series.capacity_factor(i);
    const double ei = series.intensity(i);
    curve.points.push_back({cf, ei});
    cfs.push_back(cf);
    const int k = cf_bin(cf);
    bin_sum[std::size_t(k)] += ei;
    bin_count[std::size_t(k)] += 1;
  }
  if (curve.points.empty()) {
    curve.p10_cf = std::nan("");
    curve.diagnostic = "no operating hours";
    return curve;
  }
  for (int k = 0; k <= kOverflowBin; ++k) {
    if (bin_count[std::size_t(k)] == 0) continue;
    const double center = double(k) * kBinWidth + kBinWidth / 2.0;
    curve.binned.push_back(
        {center, bin_sum[std::size_t(k)] / double(bin_count[std::size_t(k)]), bin_count[std::size_t(k)]});
  }
  curve.p10_cf = quantile(Eigen::Map<const Eigen::VectorXd>(cfs.data(), Eigen::Index(cfs.size())), 0.1);
  return curve;
}

double conditional_mean_ei(const PlantHourSeries& series, CfPredicate predicate) {
  double sum = 0.0;
  std::int64_t n = 0;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (!(series.generation_mwh[i] > 0.0)) continue;
    const double cf = series.capacity_factor(i);
    const bool match = predicate.greater ? cf > predicate.threshold : cf < predicate.threshold;
    if (!match) continue;
    sum += series.intensity(i);
    ++n;
  }
  if (n == 0) {
    throw DomainError("plant " + series.plant_id + ": no operating hours with CF " +
                      (predicate.greater ? ">" : "<") + " " + std::to_string(predicate.threshold));
  }
  return sum / double(n);
}

std::map<EpochDay, double> daily_ramp(const PlantHourSeries& series, int offset_minutes) {
  std::map<EpochDay, std::pair<double, double>> minmax;  // day -> (min, max)
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    const EpochDay day = local_day(series.hours[std::size_t(i)], offset_minutes);
    const double v = series.generation_mwh[i];
    auto [it, inserted] = minmax.emplace(day, std::make_pair(v, v));
    if (!inserted) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  std::map<EpochDay, double> out;
  for (const auto& [day, mm] : minmax) out[day] = mm.second - mm.first;
  return out;
}

std::vector<HourRamp> intra_hour_ramp(const PlantHourSeries& series) {
  std::vector<HourRamp> out;
  for (std::size_t i = 1; i < series.hours.size(); ++i) {
    if (series.hours[i] != series.hours[i - 1] + 1) continue;
    out.push_back({series.hours[i],
                   series.generation_mwh[Eigen::Index(i)] - series.generation_mwh[Eigen::Index(i - 1)]});
  }
  return out;
}

HourlyProfile hourly_profile(std::span<const PlantHourSeries* const> group, int offset_minutes) {
  if (group.empty()) throw DomainError("hourly_profile: empty plant group");
  std::array<double, 24> gen_sum{};
  std::array<double, 24> em_sum{};
  HourlyProfile profile;
  for (const PlantHourSeries* series : group) {
    for (Eigen::Index i = 0; i < series->size(); ++i) {
      const int h = local_hour_of_day(series->hours[std::size_t(i)], offset_minutes);
      gen_sum[std::size_t(h)] += series->generation_mwh[i];
      em_sum[std::size_t(h)] += series->emissions_t[i];
      profile.count[std::size_t(h)] += 1;
    }
  }
  for (std::size_t h = 0; h < 24; ++h) {
    if (profile.count[h] == 0) {
      profile.generation_mwh[h] = std::nan("");
      profile.emissions_t[h] = std::nan("");
      profile.intensity[h] = std::nan("");
      continue;
    }
    profile.generation_mwh[h] = gen_sum[h] / double(profile.count[h]);
    profile.emissions_t[h] = em_sum[h] / double(profile.count[h]);
    profile.intensity[h] =
        gen_sum[h] > 0.0 ? em_sum[h] / gen_sum[h] : std::nan("");
  }
  return profile;
}

FleetSummary fleet_summary(const AlignedDataset& ds, Region region, Fuel fuel, int year,
                           std::optional<RegionYearTotals> region_totals) {
  const auto [lo, hi] = year_index_range(ds, year);
  const double hours_in_year = double(hi - lo);

  FleetSummary s;
  s.region = region;
  s.fuel = fuel;
  s.year = year;

  std::vector<double> plant_ei;
  std::vector<double> plant_cf;
  double group_gen = 0.0, group_em = 0.0;
  double region_gen = 0.0, region_em = 0.0;

  for (const auto& p : ds.plants) {
    const PlantMeta& m = ds.meta.at(p.plant_id);
    if (m.region != region) continue;
    const double gen = p.generation_mwh.segment(lo, hi - lo).sum();
    const double em = p.emissions_t.segment(lo, hi - lo).sum();
    region_gen += gen;
    region_em += em;
    if (m.fuel != fuel) continue;

    s.plant_count += 1;
    s.installed_gw += m.nameplate_mw / 1000.0;
    group_gen += gen;
    group_em += em;
    if (gen > 0.0) plant_ei.push_back(em / gen);
    plant_cf.push_back(gen / (m.nameplate_mw * hours_in_year));
  }
  if (s.plant_count == 0) {
    throw DomainError("no plants for region " + std::string(region_name(region)) + ", fuel " +
                      std::string(fuel_name(fuel)) + ", year " + std::to_string(year));
  }
  if (region_totals) {
    region_gen = region_totals->generation_mwh;
    region_em = region_totals->emissions_t;
  }
  s.generation_share_pct = region_gen > 0.0 ? 100.0 * group_gen / region_gen : std::nan("");
  s.emissions_share_pct = region_em > 0.0 ? 100.0 * group_em / region_em : std::nan("");

  auto as_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
  };
  s.mean_ei = plant_ei.empty() ? std::nan("") : sample_mean(as_vec(plant_ei));
  s.sd_ei = sample_sd(as_vec(plant_ei));
  s.mean_cf = sample_mean(as_vec(plant_cf));
  s.sd_cf = sample_sd(as_vec(plant_cf));
  return s;
}

}  // namespace gridpanel
