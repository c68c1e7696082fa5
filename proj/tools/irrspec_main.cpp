// Command-line front end: simulation, estimation, certification and the
// Monte Carlo studies. Every output is a CSV with a `#` provenance block.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "irrspec/aliasfree.hpp"
#include "irrspec/csv.hpp"
#include "irrspec/errors.hpp"
#include "irrspec/estimate.hpp"
#include "irrspec/harness.hpp"
#include "irrspec/sampling.hpp"
#include "irrspec/simulate.hpp"
#include "irrspec/spectra.hpp"

namespace {

using namespace irrspec;

constexpr int kParameterExit = 2;
constexpr int kNumericalExit = 3;

double to_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParameterError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ParameterError("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, separator)) parts.push_back(part);
  return parts;
}

// `lo:hi:n`
std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ParameterError("grid must be lo:hi:n, got '" + text + "'");
  const double n = to_number(parts[2]);
  if (n < 2 || n != static_cast<double>(static_cast<std::size_t>(n))) {
    throw ParameterError("grid point count must be an integer >= 2");
  }
  return uniform_grid(to_number(parts[0]), to_number(parts[1]), static_cast<std::size_t>(n));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(to_number(part));
  if (values.empty()) throw ParameterError("empty list");
  return values;
}

// Replaces `--config FILE` with `--key=value` tokens read from FILE (one
// `key = value` per line, `#` comments). They are placed before the other
// options so that explicit flags take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> from_file;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw ParameterError("config line without '=': " + line);
      from_file.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
  }
  if (rest.empty()) return from_file;
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

void report_sweep(const ExperimentReport& report) {
  for (std::size_t s = 0; s < report.points.size(); ++s) {
    const auto& p = report.points[s];
    std::cerr << p.scheme_id << ": ";
    if (!p.error.empty()) {
      std::cerr << "error " << p.error << '\n';
      continue;
    }
    const RegionSummary r = summarize_regions(report, s);
    std::cerr << "median peak MSE " << r.median_peak_mse << ", median valley MSE "
              << r.median_valley_mse << ", " << p.wall_seconds << " s\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum estimation and aliasing analysis under irregular sampling"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw one Gaussian path at renewal times");
  std::string model_id = "sim5";
  std::string scheme_id = "shifted-exp:d=1,theta=1";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string method = "exact";
  std::size_t components = 4096;
  simulate->add_option("--model", model_id, "Spectrum id")->capture_default_str();
  simulate->add_option("--scheme", scheme_id, "Sampling scheme id")->capture_default_str();
  simulate->add_option("--n", n, "Number of samples")->capture_default_str();
  simulate->add_option("--seed", seed, "Seed")->capture_default_str();
  simulate->add_option("--method", method, "exact or spectral")
      ->check(CLI::IsMember({"exact", "spectral"}))
      ->capture_default_str();
  simulate->add_option("--components", components, "Components for the spectral method")
      ->capture_default_str();
  simulate->add_option("--out", out, "Output CSV")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Covariance-averaging spectral estimate");
  std::string path_file;
  double beta = 0.5;
  double bandwidth = 1.0 / 50.0;
  std::string kernel = "raised-cosine";
  std::string grid_text = "0:6.283185307179586:512";
  estimate->add_option("--path", path_file, "Path CSV with columns t, x")->required();
  estimate->add_option("--beta", beta, "Mean sampling intensity")->required();
  estimate->add_option("--bn", bandwidth, "Kernel bandwidth b_n")->capture_default_str();
  estimate->add_option("--kernel", kernel, "Kernel")
      ->check(CLI::IsMember({"raised-cosine"}))
      ->capture_default_str();
  estimate->add_option("--grid", grid_text, "Frequency grid lo:hi:n")->capture_default_str();
  estimate->add_option("--out", out, "Output CSV")->required();

  // contour
  auto* contour = app.add_subcommand("contour", "Trace f'(band) and test plane division");
  double c = 1.0;
  std::string band_text;
  std::size_t points = 2048;
  double resolution = kDefaultContourResolution;
  contour->add_option("--scheme", scheme_id, "Sampling scheme id")->capture_default_str();
  contour->add_option("--c", c, "Band [-c pi/d, c pi/d]")->capture_default_str();
  contour->add_option("--band", band_text, "Band factor c, or an explicit band lo:hi (overrides --c)");
  contour->add_option("--points", points, "Base polyline points")->capture_default_str();
  contour->add_option("--resolution", resolution, "Raster cell size")->capture_default_str();
  contour->add_option("--out", out, "Output CSV")->required();

  // band-search
  auto* band_search = app.add_subcommand("band-search", "Largest alias-free band factor c");
  double c_max = 2.0;
  double c_step = 0.05;
  band_search->add_option("--scheme", scheme_id, "Sampling scheme id")->capture_default_str();
  band_search->add_option("--c-max", c_max, "Largest factor scanned")->capture_default_str();
  band_search->add_option("--step", c_step, "Scan step")->capture_default_str();
  band_search->add_option("--points", points, "Base polyline points")->capture_default_str();
  band_search->add_option("--resolution", resolution, "Raster cell size")
      ->capture_default_str();
  band_search->add_option("--out", out, "Output CSV")->required();

  // sweeps
  ExperimentConfig experiment;
  std::string sweep_text;
  std::string out_dir = "results";
  std::string experiment_grid = "0:6.283185307179586:512";
  std::vector<CLI::App*> sweeps{
      app.add_subcommand("d-sweep", "MSE study over d with theta = 1"),
      app.add_subcommand("theta-sweep", "MSE study over theta with d = 1")};
  for (auto* sweep : sweeps) {
    sweep->add_option("--model", experiment.model_id, "Spectrum id")->capture_default_str();
    sweep->add_option("--sweep", sweep_text, "Comma-separated d (or theta) values");
    sweep->add_option("--n", experiment.n, "Samples per path")->capture_default_str();
    sweep->add_option("--runs", experiment.runs, "Runs per sweep point")->capture_default_str();
    sweep->add_option("--bn", experiment.bandwidth, "Kernel bandwidth")->capture_default_str();
    sweep->add_option("--grid", experiment_grid, "Frequency grid lo:hi:n")
        ->capture_default_str();
    sweep->add_option("--seed", experiment.master_seed, "Master seed")->capture_default_str();
    sweep->add_option("--threads", experiment.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    sweep->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  }

  // aliasing-demo
  auto* aliasing = app.add_subcommand("aliasing-demo", "X1+X2 versus X1+X3 comparison");
  double a = 1.0;
  std::size_t runs = 200;
  std::size_t max_lag = 20;
  std::size_t threads = 0;
  std::size_t demo_n = 500;
  aliasing->add_option("--scheme", scheme_id, "Sampling scheme id")->capture_default_str();
  aliasing->add_option("--a", a, "Triangle support")->capture_default_str();
  aliasing->add_option("--runs", runs, "Runs per model")->capture_default_str();
  aliasing->add_option("--n", demo_n, "Samples per path")->capture_default_str();
  aliasing->add_option("--max-lag", max_lag, "Largest lag")->capture_default_str();
  aliasing->add_option("--seed", seed, "Master seed")->capture_default_str();
  aliasing->add_option("--threads", threads, "Worker threads")->capture_default_str();
  aliasing->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  // certifier-demo
  auto* certifier = app.add_subcommand("certifier-demo", "Contours of three reference schemes");
  certifier->add_option("--points", points, "Base polyline points")->capture_default_str();
  certifier->add_option("--resolution", resolution, "Raster cell size")->capture_default_str();
  certifier->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParameterExit;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kParameterExit;
  }

  try {
    if (*simulate) {
      const SpectrumModel model = parse_spectrum(model_id);
      const SamplingScheme scheme = parse_scheme(scheme_id);
      const auto times =
          draw_times(scheme, n, derive_seed(seed, {}, StreamRole::kTimes));
      const std::uint64_t value_seed = derive_seed(seed, {}, StreamRole::kValues);
      SampledPath path = method == "exact"
                             ? sample_gaussian_path(model, times, value_seed)
                             : sample_path_spectral(model, times, components, value_seed);
      Provenance provenance;
      provenance.add("command", "simulate");
      provenance.add_config("model", model.id());
      provenance.add_config("scheme", scheme.id());
      provenance.add_config("n", std::to_string(n));
      provenance.add_config("seed", std::to_string(seed));
      provenance.add_config("method", method);
      if (method == "spectral") provenance.add_config("components", std::to_string(components));
      provenance.add("beta", scheme.beta());
      provenance.add("jitter", path.jitter);
      CsvTable table;
      table.columns = {"t", "x"};
      for (std::size_t k = 0; k < path.times.size(); ++k) {
        table.add_row({path.times[k], path.values[k]});
      }
      write_csv(out, provenance, table);
    } else if (*estimate) {
      const CsvTable input = read_csv(path_file);
      if (input.columns.size() < 2 || input.columns[0] != "t" || input.columns[1] != "x") {
        throw ParameterError(path_file + " must have columns t, x");
      }
      SampledPath path;
      for (const auto& row : input.rows) {
        path.times.push_back(to_number(row[0]));
        path.values.push_back(to_number(row[1]));
      }
      EstimatorConfig config;
      config.beta = beta;
      config.bandwidth = bandwidth;
      config.grid = parse_grid(grid_text);
      const auto phi = masry_estimate(path, config);
      Provenance provenance;
      provenance.add("command", "estimate");
      provenance.add_config("path", path_file);
      provenance.add_config("beta", format_number(beta));
      provenance.add_config("bn", format_number(bandwidth));
      provenance.add_config("kernel", kernel);
      provenance.add_config("grid", grid_text);
      CsvTable table;
      table.columns = {"lambda", "phi_hat"};
      for (std::size_t g = 0; g < phi.size(); ++g) table.add_row({config.grid[g], phi[g]});
      write_csv(out, provenance, table);
    } else if (*contour) {
      const SamplingScheme scheme = parse_scheme(scheme_id);
      Interval band;
      const auto parts = split(band_text, ':');
      if (parts.size() == 2) {
        band = {to_number(parts[0]), to_number(parts[1])};
      } else if (parts.size() > 2) {
        throw ParameterError("band must be c or lo:hi");
      } else {
        if (!band_text.empty()) c = to_number(band_text);
        if (!(scheme.min_spacing() > 0.0)) {
          throw ParameterError("--c needs d > 0; pass --band for this scheme");
        }
        const double edge = c * std::numbers::pi / scheme.min_spacing();
        band = {-edge, edge};
      }
      const ContourVerdict verdict =
          divides_plane(trace_contour(scheme, band, points, resolution), resolution);
      Provenance provenance;
      provenance.add("command", "contour");
      provenance.add_config("scheme", scheme.id());
      provenance.add_config("band", format_number(band.lo) + ":" + format_number(band.hi));
      provenance.add_config("points", std::to_string(points));
      provenance.add_config("resolution", format_number(resolution));
      provenance.add("divides_plane", verdict.divides_plane ? "true" : "false");
      provenance.add("bounded_regions", std::to_string(verdict.bounded_region_count));
      provenance.add("self_intersections", std::to_string(verdict.self_intersections));
      provenance.add("conservative", verdict.conservative ? "true" : "false");
      CsvTable table;
      table.columns = {"lambda", "re", "im"};
      for (std::size_t k = 0; k < verdict.polyline.size(); ++k) {
        table.add_row({verdict.polyline.lambda[k], verdict.polyline.points[k].real(),
                       verdict.polyline.points[k].imag()});
      }
      write_csv(out, provenance, table);
      std::cout << (verdict.divides_plane ? "divides the plane" : "does not divide the plane")
                << (verdict.conservative ? " (conservative)" : "") << '\n';
    } else if (*band_search) {
      const SamplingScheme scheme = parse_scheme(scheme_id);
      const BandSearchResult result =
          max_aliasfree_band(scheme, c_max, c_step, points, resolution);
      Provenance provenance;
      provenance.add("command", "band-search");
      provenance.add_config("scheme", scheme.id());
      provenance.add_config("c_max", format_number(c_max));
      provenance.add_config("step", format_number(c_step));
      provenance.add_config("points", std::to_string(points));
      provenance.add_config("resolution", format_number(resolution));
      provenance.add("largest_alias_free_c",
                     result.largest_alias_free ? format_number(*result.largest_alias_free)
                                               : std::string("none"));
      CsvTable table;
      table.columns = {"c", "divides_plane", "bounded_regions", "self_intersections",
                       "conservative"};
      for (const auto& [factor, verdict] : result.verdicts) {
        table.rows.push_back({format_number(factor), verdict.divides_plane ? "true" : "false",
                              std::to_string(verdict.bounded_region_count),
                              std::to_string(verdict.self_intersections),
                              verdict.conservative ? "true" : "false"});
      }
      write_csv(out, provenance, table);
      std::cout << "largest alias-free c: "
                << (result.largest_alias_free ? format_number(*result.largest_alias_free)
                                              : std::string("none"))
                << '\n';
    } else if (*sweeps[0] || *sweeps[1]) {
      const bool d_sweep = sweeps[0]->parsed();
      const auto grid = split(experiment_grid, ':');
      if (grid.size() != 3) throw ParameterError("grid must be lo:hi:n");
      experiment.grid_lo = to_number(grid[0]);
      experiment.grid_hi = to_number(grid[1]);
      experiment.grid_points = static_cast<std::size_t>(to_number(grid[2]));
      if (!sweep_text.empty()) {
        for (double v : parse_list(sweep_text)) {
          experiment.sweep.push_back(d_sweep ? SweepPoint{v, 1.0} : SweepPoint{1.0, v});
        }
      }
      const ExperimentReport report =
          d_sweep ? run_d_sweep(experiment) : run_theta_sweep(experiment);
      write_experiment_report(report, out_dir, d_sweep ? "d_sweep" : "theta_sweep");
      report_sweep(report);
    } else if (*aliasing) {
      AliasingDemoConfig config{parse_scheme(scheme_id)};
      config.a = a;
      config.runs = runs;
      config.n = demo_n;
      config.max_lag = max_lag;
      config.master_seed = seed;
      config.threads = threads;
      const AliasingDemoReport report = run_aliasing_demo(config);
      write_aliasing_report(report, config, out_dir);
      std::cout << (report.distinguishable ? "DISTINGUISHABLE" : "NOT distinguishable") << '\n';
    } else if (*certifier) {
      const auto cases = run_certifier_demo(resolution, points);
      write_certifier_report(cases, out_dir);
      for (const auto& item : cases) {
        std::cout << item.label << " (" << item.scheme_id << "): "
                  << (item.verdict.divides_plane ? "divides the plane"
                                                 : "does not divide the plane")
                  << '\n';
      }
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kParameterExit;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalExit;
  }
  return 0;
}
