#include "irrspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "irrspec/errors.hpp"
#include "irrspec/rng.hpp"

namespace irrspec {
namespace {

constexpr double kPi = std::numbers::pi;

std::string sweep_label(const SweepPoint& p) {
  return "d=" + format_number(p.d) + ",theta=" + format_number(p.theta);
}

SampledPath simulate_run(const SpectrumModel& model, const SamplingScheme& scheme,
                         std::size_t n, std::uint64_t master,
                         std::initializer_list<std::uint64_t> keys) {
  const auto times = draw_times(scheme, n, derive_seed(master, keys, StreamRole::kTimes));
  SampledPath path = sample_gaussian_path(model, times, derive_seed(master, keys, StreamRole::kValues));
  path.scheme_id = scheme.id();
  return path;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepPoint> default_d_sweep() {
  std::vector<SweepPoint> sweep;
  for (double d : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) sweep.push_back({d, 1.0});
  return sweep;
}

std::vector<SweepPoint> default_theta_sweep() {
  std::vector<SweepPoint> sweep;
  for (double theta : {0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    sweep.push_back({1.0, theta});
  }
  return sweep;
}

SamplingScheme scheme_for(const SweepPoint& point) {
  if (point.theta == 0.0) return make_deterministic(point.d);
  return make_shifted_exponential(point.d, point.theta);
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ParameterError("runs must be at least 1");
  if (n < 2) throw ParameterError("n must be at least 2");
  if (sweep.empty()) throw ParameterError("the sweep is empty");
  if (!(bandwidth > 0.0)) throw ParameterError("bandwidth must be positive");
  if (grid_points < 2 || !(grid_hi > grid_lo)) throw ParameterError("invalid frequency grid");
}

void ExperimentConfig::describe(Provenance& provenance) const {
  provenance.add_config("model", model_id);
  std::string points;
  for (const SweepPoint& p : sweep) points += (points.empty() ? "" : ";") + sweep_label(p);
  provenance.add_config("sweep", points);
  provenance.add_config("n", std::to_string(n));
  provenance.add_config("runs", std::to_string(runs));
  provenance.add_config("bandwidth", format_number(bandwidth));
  provenance.add_config("kernel", "raised-cosine");
  provenance.add_config("grid", format_number(grid_lo) + ":" + format_number(grid_hi) + ":" +
                                    std::to_string(grid_points));
  provenance.add_config("master_seed", std::to_string(master_seed));
}

MseReport mse_report(std::span<const std::vector<double>> ensemble,
                     std::span<const double> truth) {
  if (ensemble.empty()) throw ParameterError("mse_report needs a nonempty ensemble");
  const std::size_t size = truth.size();
  for (const auto& curve : ensemble) {
    if (curve.size() != size) throw ParameterError("curve and truth lengths differ");
  }
  const auto runs = static_cast<double>(ensemble.size());
  MseReport report;
  report.mean.assign(size, 0.0);
  report.bias2.resize(size);
  report.variance.assign(size, 0.0);
  report.mse.resize(size);
  report.log10_mse.resize(size);
  for (const auto& curve : ensemble) {
    for (std::size_t g = 0; g < size; ++g) report.mean[g] += curve[g];
  }
  for (double& m : report.mean) m /= runs;
  for (const auto& curve : ensemble) {
    for (std::size_t g = 0; g < size; ++g) {
      const double dev = curve[g] - report.mean[g];
      report.variance[g] += dev * dev;
    }
  }
  for (std::size_t g = 0; g < size; ++g) {
    report.variance[g] /= runs;
    const double bias = report.mean[g] - truth[g];
    report.bias2[g] = bias * bias;
    report.mse[g] = report.bias2[g] + report.variance[g];
    report.log10_mse[g] = std::log10(report.mse[g]);
  }
  return report;
}

ExperimentReport run_sweep(const ExperimentConfig& config, std::string kind) {
  config.validate();
  const SpectrumModel model = parse_spectrum(config.model_id);
  ExperimentReport report;
  report.kind = std::move(kind);
  report.config = config;
  report.grid = uniform_grid(config.grid_lo, config.grid_hi, config.grid_points);
  for (double lambda : report.grid) report.truth.push_back(model.psd(lambda));

  for (std::size_t s = 0; s < config.sweep.size(); ++s) {
    const auto start = std::chrono::steady_clock::now();
    SweepPointReport point;
    point.point = config.sweep[s];
    const SamplingScheme scheme = scheme_for(point.point);
    point.scheme_id = scheme.id();
    EstimatorConfig estimator;
    estimator.bandwidth = config.bandwidth;
    estimator.beta = scheme.beta();
    estimator.grid = report.grid;

    point.curves.assign(config.runs, {});
    std::vector<std::string> errors(config.runs);
    parallel_for(config.runs, config.threads, [&](std::size_t run) {
      try {
        const SampledPath path = simulate_run(model, scheme, config.n, config.master_seed,
                                              {static_cast<std::uint64_t>(s), run});
        point.curves[run] = masry_estimate(path, estimator);
      } catch (const NumericalError& e) {
        errors[run] = "run " + std::to_string(run) + ": " + e.what();
      }
    });
    for (const std::string& e : errors) {
      if (!e.empty()) {
        point.error = e;
        break;
      }
    }
    if (point.error.empty()) {
      point.runs = config.runs;
      point.stats = mse_report(point.curves, report.truth);
    } else {
      point.curves.clear();
    }
    point.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.points.push_back(std::move(point));
  }
  return report;
}

ExperimentReport run_d_sweep(ExperimentConfig config) {
  if (config.sweep.empty()) config.sweep = default_d_sweep();
  return run_sweep(config, "d-sweep");
}

ExperimentReport run_theta_sweep(ExperimentConfig config) {
  if (config.sweep.empty()) config.sweep = default_theta_sweep();
  return run_sweep(config, "theta-sweep");
}

void write_experiment_report(const ExperimentReport& report,
                             const std::filesystem::path& directory, const std::string& stem) {
  Provenance provenance;
  provenance.add("experiment", report.kind);
  report.config.describe(provenance);

  CsvTable summary;
  summary.columns = {"sweep_index", "d",   "theta", "lambda",    "truth",  "mean",
                     "bias2",       "variance", "mse", "log10_mse", "status"};
  CsvTable curves;
  curves.columns = {"sweep_index", "run", "lambda", "phi_hat"};
  for (std::size_t s = 0; s < report.points.size(); ++s) {
    const SweepPointReport& p = report.points[s];
    const std::string index = std::to_string(s);
    if (!p.error.empty()) {
      summary.rows.push_back({index, format_number(p.point.d), format_number(p.point.theta), "",
                              "", "", "", "", "", "", "error: " + p.error});
      continue;
    }
    for (std::size_t g = 0; g < report.grid.size(); ++g) {
      summary.rows.push_back({index, format_number(p.point.d), format_number(p.point.theta),
                              format_number(report.grid[g]), format_number(report.truth[g]),
                              format_number(p.stats.mean[g]), format_number(p.stats.bias2[g]),
                              format_number(p.stats.variance[g]), format_number(p.stats.mse[g]),
                              format_number(p.stats.log10_mse[g]), "ok"});
    }
    for (std::size_t r = 0; r < p.curves.size(); ++r) {
      for (std::size_t g = 0; g < report.grid.size(); ++g) {
        curves.rows.push_back({index, std::to_string(r), format_number(report.grid[g]),
                               format_number(p.curves[r][g])});
      }
    }
  }
  write_csv(directory / (stem + "_summary.csv"), provenance, summary);
  write_csv(directory / (stem + "_curves.csv"), provenance, curves);
}

bool in_peak_region(double lambda) noexcept {
  return std::abs(lambda - 0.75 * kPi) <= 0.2 || std::abs(lambda - 1.75 * kPi) <= 0.2;
}

bool in_valley_region(double lambda) noexcept {
  return (lambda >= 1.0 && lambda <= 1.6) || (lambda >= 2.9 && lambda <= 4.2) ||
         (lambda >= 6.0 && lambda <= 2.0 * kPi);
}

double region_median(std::span<const double> grid, std::span<const double> values,
                     const std::function<bool(double)>& region) {
  std::vector<double> selected;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (region(grid[g])) selected.push_back(values[g]);
  }
  if (selected.empty()) throw ParameterError("no grid point falls in the region");
  std::sort(selected.begin(), selected.end());
  const std::size_t mid = selected.size() / 2;
  return selected.size() % 2 ? selected[mid] : 0.5 * (selected[mid - 1] + selected[mid]);
}

RegionSummary summarize_regions(const ExperimentReport& report, std::size_t point) {
  const SweepPointReport& p = report.points.at(point);
  if (!p.error.empty()) throw NumericalError("sweep point failed: " + p.error);
  RegionSummary summary;
  summary.median_peak_mse = region_median(report.grid, p.stats.mse, in_peak_region);
  summary.median_valley_mse = region_median(report.grid, p.stats.mse, in_valley_region);
  std::vector<double> ratio(report.grid.size());
  for (std::size_t g = 0; g < ratio.size(); ++g) {
    ratio[g] = p.stats.mse[g] / (report.truth[g] * report.truth[g]);
  }
  summary.peak_ratio = region_median(report.grid, ratio, in_peak_region);
  return summary;
}

AliasingDemoReport run_aliasing_demo(const AliasingDemoConfig& config) {
  const SamplingScheme& scheme = config.scheme;
  if (!(config.a > 0.0)) throw ParameterError("a must be positive");
  if (config.a > scheme.min_spacing() && scheme.min_spacing() > 0.0) {
    throw ParameterError("a = " + format_number(config.a) + " exceeds the minimum spacing " +
                         format_number(scheme.min_spacing()));
  }
  if (config.runs < 2) throw ParameterError("the aliasing demo needs at least two runs");
  if (config.max_lag >= config.n) throw ParameterError("max_lag must be below n");

  const SpectrumModel sim = make_simulation_spectrum();
  const SpectrumModel x1 = sim.scaled(1.0 / sim.variance());
  const SpectrumModel x2 = make_triangle_pair(config.a).model();
  const SpectrumModel x3 = make_triangle_pair(0.5 * config.a).model();
  const SpectrumModel first = sum(x1, x2);
  const SpectrumModel second = sum(x1, x3);

  AliasingDemoReport report;
  report.scheme_id = scheme.id();
  report.first_id = first.id();
  report.second_id = second.id();

  std::vector<SampledPath> paths_first(config.runs);
  std::vector<SampledPath> paths_second(config.runs);
  parallel_for(2 * config.runs, config.threads, [&](std::size_t job) {
    const std::size_t pair = job / config.runs;
    const std::size_t run = job % config.runs;
    auto& slot = pair == 0 ? paths_first[run] : paths_second[run];
    slot = simulate_run(pair == 0 ? first : second, scheme, config.n, config.master_seed,
                        {pair, run});
  });
  report.first = empirical_covariance_sequence(paths_first, config.max_lag);
  report.second = empirical_covariance_sequence(paths_second, config.max_lag);

  // The covariance of an independent sum is the sum of covariances, so the
  // shared component enters both sequences identically.
  const auto common = sampled_covariance_sequence(x1, scheme, config.max_lag);
  const auto own_first = sampled_covariance_sequence(x2, scheme, config.max_lag);
  const auto own_second = sampled_covariance_sequence(x3, scheme, config.max_lag);
  for (std::size_t n = 0; n <= config.max_lag; ++n) {
    report.theory_first.push_back(common[n] + own_first[n]);
    report.theory_second.push_back(common[n] + own_second[n]);
    const double pooled = std::hypot(report.first.standard_error[n],
                                     report.second.standard_error[n]);
    const double z = std::abs(report.first.mean[n] - report.second.mean[n]) / pooled;
    report.z_scores.push_back(z);
    if (z > 3.0) report.distinguishable = true;
  }

  report.view_first = compound_covariance_view(first, scheme);
  report.view_second = compound_covariance_view(second, scheme);
  double diff = std::abs(report.view_first.atom_at_zero - report.view_second.atom_at_zero);
  const auto& d1 = report.view_first.density;
  const auto& d2 = report.view_second.density;
  if (d1.size() != d2.size()) throw NumericalError("compound view grids differ");
  for (std::size_t k = 0; k < d1.size(); ++k) diff = std::max(diff, std::abs(d1[k] - d2[k]));
  const auto& a1 = report.view_first.atoms;
  const auto& a2 = report.view_second.atoms;
  if (a1.size() != a2.size()) throw NumericalError("compound view atoms differ");
  for (std::size_t k = 0; k < a1.size(); ++k) {
    diff = std::max({diff, std::abs(a1[k].mass - a2[k].mass),
                     std::abs(a1[k].location - a2[k].location)});
  }
  report.max_view_difference = diff;
  return report;
}

void write_aliasing_report(const AliasingDemoReport& report, const AliasingDemoConfig& config,
                           const std::filesystem::path& directory) {
  Provenance provenance;
  provenance.add("experiment", "aliasing-demo");
  provenance.add_config("scheme", report.scheme_id);
  provenance.add_config("a", format_number(config.a));
  provenance.add_config("runs", std::to_string(config.runs));
  provenance.add_config("n", std::to_string(config.n));
  provenance.add_config("max_lag", std::to_string(config.max_lag));
  provenance.add_config("master_seed", std::to_string(config.master_seed));
  provenance.add("first_model", report.first_id);
  provenance.add("second_model", report.second_id);
  provenance.add("verdict", report.distinguishable ? "DISTINGUISHABLE" : "NOT distinguishable");
  provenance.add("max_compound_view_difference", report.max_view_difference);

  CsvTable sequences;
  sequences.columns = {"lag", "r_hat_first", "se_first", "r_hat_second", "se_second",
                       "z", "r_theory_first", "r_theory_second"};
  for (std::size_t n = 0; n < report.z_scores.size(); ++n) {
    sequences.add_row({static_cast<double>(n), report.first.mean[n],
                       report.first.standard_error[n], report.second.mean[n],
                       report.second.standard_error[n], report.z_scores[n],
                       report.theory_first[n], report.theory_second[n]});
  }
  write_csv(directory / "aliasing_sequences.csv", provenance, sequences);

  CsvTable views;
  views.columns = {"u", "measure_first", "measure_second"};
  views.add_row({0.0, report.view_first.atom_at_zero, report.view_second.atom_at_zero});
  const auto& d1 = report.view_first.density;
  for (std::size_t k = 0; k < d1.size(); ++k) {
    views.add_row({report.view_first.step * static_cast<double>(k),
                   d1[k], report.view_second.density[k]});
  }
  for (std::size_t k = 0; k < report.view_first.atoms.size(); ++k) {
    views.add_row({report.view_first.atoms[k].location, report.view_first.atoms[k].mass,
                   report.view_second.atoms[k].mass});
  }
  Provenance view_provenance = provenance;
  view_provenance.add("rows", "first row: atoms at u = 0; then density on the renewal grid or "
                              "off-origin atoms");
  write_csv(directory / "aliasing_compound_views.csv", view_provenance, views);
}

std::vector<CertifierCase> run_certifier_demo(double resolution, std::size_t points) {
  const double d = 1.0;
  std::vector<CertifierCase> cases;
  const auto add = [&](std::string label, const SamplingScheme& scheme, double c) {
    cases.push_back({std::move(label), scheme.id(), certify_band(scheme, c, points, resolution)});
  };
  add("shifted-exponential", make_shifted_exponential(d, d), 1.0);
  add("two-point", make_wide_band_two_point(d), 1.1);
  add("deterministic", make_deterministic(d), 1.0);
  return cases;
}

void write_certifier_report(std::span<const CertifierCase> cases,
                            const std::filesystem::path& directory) {
  Provenance provenance;
  provenance.add("experiment", "certifier-demo");
  if (!cases.empty()) {
    provenance.add_config("resolution", format_number(cases.front().verdict.resolution));
    provenance.add_config("polyline_points",
                          std::to_string(cases.front().verdict.polyline.size()));
  }
  CsvTable verdicts;
  verdicts.columns = {"case", "scheme", "band_lo", "band_hi", "divides_plane",
                      "bounded_regions", "self_intersections", "conservative", "resolution"};
  for (const CertifierCase& c : cases) {
    const ContourVerdict& v = c.verdict;
    verdicts.rows.push_back({c.label, c.scheme_id, format_number(v.band.lo),
                             format_number(v.band.hi), v.divides_plane ? "true" : "false",
                             std::to_string(v.bounded_region_count),
                             std::to_string(v.self_intersections),
                             v.conservative ? "true" : "false", format_number(v.resolution)});
    CsvTable contour;
    contour.columns = {"lambda", "re", "im"};
    for (std::size_t k = 0; k < v.polyline.size(); ++k) {
      contour.add_row({v.polyline.lambda[k], v.polyline.points[k].real(),
                       v.polyline.points[k].imag()});
    }
    Provenance p = provenance;
    p.add("scheme", c.scheme_id);
    write_csv(directory / ("contour_" + c.label + ".csv"), p, contour);
  }
  write_csv(directory / "certifier_verdicts.csv", provenance, verdicts);
}

}  // namespace irrspec
