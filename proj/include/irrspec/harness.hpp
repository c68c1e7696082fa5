#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "irrspec/aliasfree.hpp"
#include "irrspec/csv.hpp"
#include "irrspec/estimate.hpp"
#include "irrspec/sampling.hpp"
#include "irrspec/simulate.hpp"
#include "irrspec/spectra.hpp"

namespace irrspec {

struct SweepPoint {
  double d = 0.0;
  double theta = 1.0;
};

std::vector<SweepPoint> default_d_sweep();      // d in {0, 0.5, 1, 2, 4, 8}, theta = 1
std::vector<SweepPoint> default_theta_sweep();  // d = 1, theta in {0, ..., 20}

// Shifted-exponential scheme for a sweep point; theta = 0 gives deterministic
// spacing d and d = 0 gives Poisson sampling.
SamplingScheme scheme_for(const SweepPoint& point);

struct ExperimentConfig {
  std::string model_id = "sim5";
  std::vector<SweepPoint> sweep;
  std::size_t n = 1000;
  std::size_t runs = 100;
  double bandwidth = 1.0 / 50.0;
  double grid_lo = 0.0;
  double grid_hi = 6.283185307179586;
  std::size_t grid_points = 512;
  std::uint64_t master_seed = 1;
  // 0 uses std::thread::hardware_concurrency().
  std::size_t threads = 0;

  // Throws ParameterError unless runs >= 1, n >= 2 and the sweep is nonempty.
  void validate() const;
  // Config echo for provenance headers, in a fixed order.
  void describe(Provenance& provenance) const;
};

struct MseReport {
  std::vector<double> mean;
  std::vector<double> bias2;
  std::vector<double> variance;  // population variance over runs
  std::vector<double> mse;       // bias2 + variance
  std::vector<double> log10_mse;
};

// Per-lambda mean squared error against `truth` and its decomposition.
MseReport mse_report(std::span<const std::vector<double>> ensemble,
                     std::span<const double> truth);

struct SweepPointReport {
  SweepPoint point;
  std::string scheme_id;
  std::vector<std::vector<double>> curves;  // one estimate per run
  MseReport stats;
  std::size_t runs = 0;
  double wall_seconds = 0.0;
  std::string error;  // nonempty when a run failed and the point was aborted
};

struct ExperimentReport {
  std::string kind;
  ExperimentConfig config;
  std::vector<double> grid;
  std::vector<double> truth;
  std::vector<SweepPointReport> points;
};

// Simulates config.runs paths of config.n samples per sweep point and
// estimates the spectrum of each. Seeds derive from (master seed, sweep
// index, run index).
ExperimentReport run_sweep(const ExperimentConfig& config, std::string kind = "sweep");
// config.sweep defaults to default_d_sweep() when empty; likewise below.
ExperimentReport run_d_sweep(ExperimentConfig config);
ExperimentReport run_theta_sweep(ExperimentConfig config);

// Writes <stem>_summary.csv and <stem>_curves.csv into `directory`.
void write_experiment_report(const ExperimentReport& report,
                             const std::filesystem::path& directory, const std::string& stem);

// Frequencies within 0.2 of either spectral peak, 3 pi / 4 and 7 pi / 4.
bool in_peak_region(double lambda) noexcept;
// [1.0, 1.6], [2.9, 4.2] and [6.0, 2 pi], where the density is small.
bool in_valley_region(double lambda) noexcept;

// Median of values[k] over grid nodes where `region` holds.
double region_median(std::span<const double> grid, std::span<const double> values,
                     const std::function<bool(double)>& region);

struct RegionSummary {
  double median_peak_mse = 0.0;
  double median_valley_mse = 0.0;
  // Median over the peak region of mse / truth^2.
  double peak_ratio = 0.0;
};

RegionSummary summarize_regions(const ExperimentReport& report, std::size_t point);

struct AliasingDemoConfig {
  SamplingScheme scheme;
  double a = 1.0;
  std::size_t runs = 200;
  std::size_t n = 500;
  std::size_t max_lag = 20;
  std::uint64_t master_seed = 1;
  std::size_t threads = 0;
};

struct AliasingDemoReport {
  std::string scheme_id;
  std::string first_id;   // X1 + triangle(a)
  std::string second_id;  // X1 + triangle(a / 2)
  CovarianceSequenceEstimate first;
  CovarianceSequenceEstimate second;
  std::vector<double> theory_first;
  std::vector<double> theory_second;
  // |r_hat_1(n) - r_hat_2(n)| / sqrt(se_1^2 + se_2^2).
  std::vector<double> z_scores;
  bool distinguishable = false;
  CompoundMeasureView view_first;
  CompoundMeasureView view_second;
  double max_view_difference = 0.0;
};

// X1 is the simulation spectrum scaled to unit variance; X2 and X3 are
// triangle spectra of support a and a / 2 (both unit variance). Throws
// ParameterError when a exceeds a positive minimum spacing; Poisson sampling
// (d = 0) is accepted as the control case.
AliasingDemoReport run_aliasing_demo(const AliasingDemoConfig& config);

void write_aliasing_report(const AliasingDemoReport& report, const AliasingDemoConfig& config,
                           const std::filesystem::path& directory);

struct CertifierCase {
  std::string label;
  std::string scheme_id;
  ContourVerdict verdict;
};

// Shifted-exponential with mean 2d over [-pi/d, pi/d], the wide-band
// two-point scheme over [-1.1 pi/d, 1.1 pi/d] and deterministic spacing over
// [-pi/d, pi/d], all with d = 1.
std::vector<CertifierCase> run_certifier_demo(double resolution = kDefaultContourResolution,
                                              std::size_t points = 2048);

void write_certifier_report(std::span<const CertifierCase> cases,
                            const std::filesystem::path& directory);

// Calls body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace irrspec
