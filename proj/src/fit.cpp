#include "gridpanel/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <utility>

#include <json.hpp>

#include "gridpanel/csv.hpp"
#include "gridpanel/errors.hpp"
#include "gridpanel/stats.hpp"

namespace gridpanel {

namespace {

int dependent_column(Dependent dep) {
  switch (dep) {
    case Dependent::Generation: return 0;
    case Dependent::Emissions: return 1;
    case Dependent::Intensity: return 2;
  }
  throw Error(ErrorClass::Internal, "unhandled dependent");
}

// Shared by the daily-panel and hourly-plant entry points. Rows are sorted by
// (entity, time) before any accumulation so every reported number is
// independent of input row order.
FitResult fit_core(const TransformedPanel& panel, const DesignSpec& spec, const FitOptions& opts,
                   std::string plant_id) {
  FitResult out;
  out.spec_id = spec.id;
  out.dependent = spec.dependent;
  out.region = panel.region;
  out.plant_id = std::move(plant_id);
  out.se_mode = opts.se_mode;
  out.policy = panel.policy;
  out.imports_shift = panel.imports_shift;

  const auto n = static_cast<std::size_t>(panel.n());
  if (n == 0) throw EstimationError("empty estimation sample after the zero policy");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (panel.entity[a] != panel.entity[b]) return panel.entity[a] < panel.entity[b];
    return panel.time[a] < panel.time[b];
  });

  std::vector<FeGroup> groups;
  auto reordered = [&](const std::vector<std::int32_t>& src) {
    std::vector<std::int32_t> codes(n);
    for (std::size_t i = 0; i < n; ++i) codes[i] = src[order[i]];
    return codes;
  };
  if (spec.fe_entity) groups.push_back(make_group("entity", reordered(panel.entity)));
  if (spec.fe_month) groups.push_back(make_group("month", reordered(panel.month)));
  if (spec.fe_year) groups.push_back(make_group("year", reordered(panel.year)));
  if (spec.fe_entity_month) {
    const auto n_month = static_cast<std::int32_t>(panel.month_levels.size());
    std::vector<std::int32_t> codes(n);
    for (std::size_t i = 0; i < n; ++i) {
      codes[i] = panel.entity[order[i]] * n_month + panel.month[order[i]];
    }
    groups.push_back(make_group("entity_month", std::move(codes)));
  }
  if (groups.empty()) {
    // No declared effects still absorbs a grand mean, keeping slopes and the
    // within-R^2 comparable across specifications.
    groups.push_back(make_group("intercept", std::vector<std::int32_t>(n, 0)));
  }

  const std::vector<Eigen::Index> kept = drop_singletons(groups);
  out.singletons_dropped = static_cast<std::int64_t>(n - kept.size());
  if (kept.empty()) throw EstimationError("every row was removed by singleton dropping");

  const auto m = static_cast<Eigen::Index>(kept.size());
  const auto k = static_cast<Eigen::Index>(spec.regressors.size());
  Eigen::MatrixXd data(m, 1 + k);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t row = order[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])];
    data(i, 0) = panel.dependents(static_cast<Eigen::Index>(row), dependent_column(spec.dependent));
    for (Eigen::Index j = 0; j < k; ++j) {
      data(i, 1 + j) =
          panel.covariates(static_cast<Eigen::Index>(row), spec.regressors[static_cast<std::size_t>(j)]);
    }
  }

  Eigen::VectorXd original_norms(k);
  for (Eigen::Index j = 0; j < k; ++j) original_norms[j] = data.col(1 + j).norm();

  const AbsorbStats stats = absorb_fixed_effects(data, groups, opts.absorb);
  out.absorb_sweeps = stats.sweeps;
  out.absorbed_df = absorbed_dof(groups);
  for (const auto& g : groups) out.fe_levels[g.name] = g.n_levels;

  std::vector<std::int32_t> clusters(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    clusters[static_cast<std::size_t>(i)] =
        panel.entity[order[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])]];
  }

  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  for (int r : spec.regressors) names.push_back(covariate_names()[static_cast<std::size_t>(r)]);

  OlsOptions ols_opts;
  ols_opts.se_mode = opts.se_mode;
  ols_opts.clusters = clusters;
  ols_opts.absorbed_df = out.absorbed_df;
  ols_opts.collinearity_tol = opts.collinearity_tol;

  const OlsResult ols =
      ols_fit(data.rightCols(k), data.col(0), original_norms, std::move(names), ols_opts);

  out.regressor_names = ols.names;
  out.coefficients = ols.beta;
  out.std_errors = ols.se;
  out.dropped_collinear = ols.dropped_collinear;
  out.r_squared = ols.r_squared;
  out.n_obs = ols.n_obs;
  return out;
}

}  // namespace

std::optional<double> FitResult::coefficient(std::string_view regressor) const {
  for (std::size_t i = 0; i < regressor_names.size(); ++i) {
    if (regressor_names[i] == regressor) return coefficients[static_cast<Eigen::Index>(i)];
  }
  return std::nullopt;
}

std::optional<double> FitResult::std_error(std::string_view regressor) const {
  for (std::size_t i = 0; i < regressor_names.size(); ++i) {
    if (regressor_names[i] == regressor) return std_errors[static_cast<Eigen::Index>(i)];
  }
  return std::nullopt;
}

FitResult fit_panel(const TransformedPanel& panel, const DesignSpec& spec, const FitOptions& opts) {
  return fit_core(panel, spec, opts, "");
}

FitResult fit_plant_hourly(const TransformedPanel& design, const DesignSpec& spec,
                           const FitOptions& opts) {
  if (spec.fe_entity || spec.fe_entity_month) {
    throw ConfigError("specification " + spec.id +
                      " requests entity effects; single-plant hourly fits need the hourly variant");
  }
  if (design.entity_levels.size() != 1) {
    throw ConfigError("hourly fit requires a design for exactly one plant, got " +
                      std::to_string(design.entity_levels.size()));
  }
  const std::string& plant = design.entity_levels.front();
  if (design.n() < static_cast<Eigen::Index>(opts.min_plant_hours)) {
    FitResult out;
    out.spec_id = spec.id;
    out.dependent = spec.dependent;
    out.region = design.region;
    out.plant_id = plant;
    out.se_mode = opts.se_mode;
    out.policy = design.policy;
    out.imports_shift = design.imports_shift;
    out.n_obs = design.n();
    out.r_squared = std::nan("");
    out.skipped = true;
    out.diagnostic = "only " + std::to_string(design.n()) + " usable hours (minimum " +
                     std::to_string(opts.min_plant_hours) + ")";
    return out;
  }
  return fit_core(design, spec, opts, plant);
}

CoefficientDistribution coefficient_distribution(std::span<const FitResult> fits,
                                                 const std::string& regressor, int n_bins,
                                                 std::map<std::string, double> annotations) {
  if (n_bins < 1) throw DomainError("coefficient histogram needs at least one bin");
  std::vector<double> values;
  values.reserve(fits.size());
  for (const FitResult& fit : fits) {
    if (fit.skipped) continue;
    if (auto c = fit.coefficient(regressor)) values.push_back(*c);
  }
  if (values.empty()) {
    throw DomainError("no successful fit reports regressor " + regressor);
  }

  CoefficientDistribution out;
  out.regressor = regressor;
  out.n_fits = static_cast<std::int64_t>(values.size());
  out.annotations = std::move(annotations);

  const Eigen::Map<const Eigen::VectorXd> v(values.data(),
                                            static_cast<Eigen::Index>(values.size()));
  out.mean = sample_mean(v);
  out.sd = sample_sd(v);

  Eigen::VectorXd sorted = v;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  for (const auto& [label, q] : std::initializer_list<std::pair<const char*, double>>{
           {"p05", 0.05}, {"p25", 0.25}, {"p50", 0.50}, {"p75", 0.75}, {"p95", 0.95}}) {
    out.quantiles[label] = quantile_sorted(sorted, q);
  }

  const double lo = sorted[0];
  const double hi = sorted[sorted.size() - 1];
  if (hi == lo) {
    out.bins.push_back({lo, hi, out.n_fits});
    return out;
  }
  out.bins.assign(static_cast<std::size_t>(n_bins), HistogramBin{});
  const double width = (hi - lo) / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    out.bins[static_cast<std::size_t>(b)].lo = lo + b * width;
    out.bins[static_cast<std::size_t>(b)].hi = b + 1 == n_bins ? hi : lo + (b + 1) * width;
  }
  for (double x : values) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    b = std::min(b, static_cast<std::size_t>(n_bins - 1));
    out.bins[b].count += 1;
  }
  return out;
}

namespace {

nlohmann::ordered_json coefficient_object(const std::vector<std::string>& names,
                                          const Eigen::VectorXd& values) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < names.size(); ++i) {
    obj[names[i]] = values[static_cast<Eigen::Index>(i)];
  }
  return obj;
}

double json_double(const nlohmann::ordered_json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

void write_fit_json(const FitResult& fit, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["spec_id"] = fit.spec_id;
  j["dependent"] = std::string(dependent_name(fit.dependent));
  j["region"] = fit.region;
  j["plant_id"] = fit.plant_id;
  j["se_mode"] = se_mode_name(fit.se_mode);
  j["zero_policy"] = zero_policy_name(fit.policy);
  j["imports_shift"] = fit.imports_shift;
  j["skipped"] = fit.skipped;
  j["diagnostic"] = fit.diagnostic;
  j["n_obs"] = fit.n_obs;
  j["r_squared"] = fit.r_squared;
  j["coefficients"] = coefficient_object(fit.regressor_names, fit.coefficients);
  j["std_errors"] = coefficient_object(fit.regressor_names, fit.std_errors);
  j["dropped_collinear"] = fit.dropped_collinear;
  j["fe_levels"] = fit.fe_levels;
  j["absorbed_df"] = fit.absorbed_df;
  j["singletons_dropped"] = fit.singletons_dropped;
  j["absorb_sweeps"] = fit.absorb_sweeps;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out.good()) throw IoError("failed writing " + path.string());
}

FitResult read_fit_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open fit file " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("fit file " + path.string() + " is not valid JSON: " + e.what());
  }

  FitResult fit;
  try {
    fit.spec_id = j.at("spec_id").get<std::string>();
    fit.dependent = parse_dependent(j.at("dependent").get<std::string>());
    fit.region = j.at("region").get<std::string>();
    fit.plant_id = j.at("plant_id").get<std::string>();
    fit.se_mode = parse_se_mode(j.at("se_mode").get<std::string>());
    fit.policy = parse_zero_policy(j.at("zero_policy").get<std::string>());
    fit.imports_shift = json_double(j.at("imports_shift"));
    fit.skipped = j.at("skipped").get<bool>();
    fit.diagnostic = j.at("diagnostic").get<std::string>();
    fit.n_obs = j.at("n_obs").get<std::int64_t>();
    fit.r_squared = json_double(j.at("r_squared"));

    const auto& coeffs = j.at("coefficients");
    const auto& ses = j.at("std_errors");
    fit.regressor_names.reserve(coeffs.size());
    fit.coefficients.resize(static_cast<Eigen::Index>(coeffs.size()));
    fit.std_errors.resize(static_cast<Eigen::Index>(coeffs.size()));
    Eigen::Index i = 0;
    for (const auto& [name, value] : coeffs.items()) {
      fit.regressor_names.push_back(name);
      fit.coefficients[i] = json_double(value);
      fit.std_errors[i] = json_double(ses.at(name));
      ++i;
    }
    fit.dropped_collinear = j.at("dropped_collinear").get<std::vector<std::string>>();
    fit.fe_levels = j.at("fe_levels").get<std::map<std::string, std::int64_t>>();
    fit.absorbed_df = j.at("absorbed_df").get<std::int64_t>();
    fit.singletons_dropped = j.at("singletons_dropped").get<std::int64_t>();
    fit.absorb_sweeps = j.at("absorb_sweeps").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("fit file " + path.string() + " is missing fields: " + e.what());
  }
  return fit;
}

void write_fit_table_csv(std::span<const FitResult> fits, const std::filesystem::path& path) {
  const std::vector<std::string> columns = {
      "spec_id",     "dependent", "region", "plant_id",  "se_mode", "zero_policy",
      "regressor",   "coefficient", "std_error", "stars", "r_squared", "n_obs"};
  CsvWriter writer(path, columns);
  for (const FitResult& fit : fits) {
    if (fit.skipped) continue;
    for (std::size_t i = 0; i < fit.regressor_names.size(); ++i) {
      const double beta = fit.coefficients[static_cast<Eigen::Index>(i)];
      const double se = fit.std_errors[static_cast<Eigen::Index>(i)];
      const double p = normal_p_two_sided(beta / se);
      const std::vector<std::string> row = {
          fit.spec_id,
          std::string(dependent_name(fit.dependent)),
          fit.region,
          fit.plant_id,
          se_mode_name(fit.se_mode),
          zero_policy_name(fit.policy),
          fit.regressor_names[i],
          format_double(beta),
          format_double(se),
          significance_stars(p),
          format_double(fit.r_squared),
          std::to_string(fit.n_obs)};
      writer.row(row);
    }
  }
  writer.close();
}

void write_coefficient_distribution_csv(const CoefficientDistribution& dist,
                                        const std::filesystem::path& path) {
  const std::vector<std::string> columns = {"kind", "key", "value", "bin_lo", "bin_hi", "count"};
  CsvWriter writer(path, columns);
  auto summary = [&](const std::string& key, double value) {
    writer.row(std::vector<std::string>{"summary", key, format_double(value), "", "", ""});
  };
  writer.row(std::vector<std::string>{"summary", "regressor", dist.regressor, "", "", ""});
  summary("n_fits", static_cast<double>(dist.n_fits));
  summary("mean", dist.mean);
  summary("sd", dist.sd);
  for (const auto& [label, value] : dist.quantiles) summary(label, value);
  for (const auto& [label, value] : dist.annotations) {
    writer.row(std::vector<std::string>{"annotation", label, format_double(value), "", "", ""});
  }
  for (const HistogramBin& bin : dist.bins) {
    writer.row(std::vector<std::string>{"bin", "", "", format_double(bin.lo), format_double(bin.hi),
                                        std::to_string(bin.count)});
  }
  writer.close();
}

}  // namespace gridpanel
