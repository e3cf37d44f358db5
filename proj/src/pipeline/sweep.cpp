#include "otmss/pipeline/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

namespace otmss::pipeline {

std::vector<double> k_grid(const SweepConfig& config) {
  const int n = config.k_points;
  const double lmin = std::log(config.k_min);
  const double lmax = std::log(config.k_max);
  std::vector<double> ks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ks[static_cast<std::size_t>(i)] = std::exp(lmin + (lmax - lmin) * i / (n - 1));
  }
  ks.front() = config.k_min;
  ks.back() = config.k_max;

  const double pivot = config.anchors.pivot;
  if (n > 2 && pivot > config.k_min && pivot < config.k_max) {
    std::size_t best = 1;
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
      if (std::abs(std::log(ks[i] / pivot)) < std::abs(std::log(ks[best] / pivot))) best = i;
    }
    ks[best] = pivot;
  }
  return ks;
}

double relative_variation(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  return scale == 0.0 ? 0.0 : (*hi - *lo) / scale;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

RunReport run_sweep(const SweepConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  RunReport report;
  report.config = config;
  report.config_echo = echo_config(config);
  report.provenance.timestamp = utc_timestamp();
  report.provenance.config_hash = config_hash(config);

  const auto labels = k_grid(config);
  std::vector<double> internal(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) internal[i] = labels[i] * config.unit_scale;

  const auto dyn = config.dynamics();
  const auto settings = config.spectrum();
  const auto points = evolve_grid(internal, dyn);

  auto& sum = report.summary;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& gp = points[i];
    sum.slaved_steps += gp.stats.slaved_steps;
    sum.mode_switches += gp.stats.mode_switches;
    if (gp.stats.capped) ++sum.capped;
    if (gp.failed) {
      sum.failures.push_back({labels[i], gp.error});
      continue;
    }
    if (gp.stats.capped) {
      sum.failures.push_back({labels[i], "squeeze amplitude exceeded r_cap"});
      continue;
    }
    try {
      const double eta = -gp.state.x / gp.k;
      report.records.push_back(make_record(labels[i], gp.state, config.background, eta, settings));
    } catch (const std::exception& e) {
      sum.failures.push_back({labels[i], e.what()});
    }
  }

  std::vector<double> rs;
  std::vector<double> phis;
  for (const auto& rec : report.records) {
    sum.max_gamma_deviation = std::max(sum.max_gamma_deviation, std::abs(rec.gamma - 1.0));
    sum.max_wronskian_residual = std::max(sum.max_wronskian_residual, rec.wronskian_residual);
    sum.max_occupation = std::max(sum.max_occupation, rec.occupation);
    rs.push_back(rec.r);
    phis.push_back(rec.phi);
    if (rec.k == config.anchors.pivot) {
      sum.pivot_on_grid = true;
      sum.pivot_gamma = rec.gamma;
      sum.pivot_power = rec.power_otmss;
    }
  }
  if (!rs.empty()) {
    sum.r_min = *std::min_element(rs.begin(), rs.end());
    sum.r_max = *std::max_element(rs.begin(), rs.end());
    sum.phi_min = *std::min_element(phis.begin(), phis.end());
    sum.phi_max = *std::max_element(phis.begin(), phis.end());
  }
  sum.r_variation = relative_variation(rs);
  sum.phi_variation = relative_variation(phis);

  if (report.records.size() >= 3) {
    try {
      const auto fit = fit_tilt(report.records, config.anchors.pivot);
      sum.fit_valid = true;
      sum.fitted_amplitude = fit.amplitude;
      sum.fitted_tilt = fit.tilt;
      sum.fit_rms_residual = fit.rms_residual;
    } catch (const std::invalid_argument&) {
      sum.fit_valid = false;
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

} // namespace otmss::pipeline
