// Execution of parsed run plans: mode dispatch, preset studies, and
// CSV/JSON persistence with reproducibility sidecars.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcg/config.hpp"
#include "dcg/snlse.hpp"

namespace dcg {

struct RunnerOptions {
  std::string out_dir = ".";
  int threads = 0;  // 0 keeps the environment/OpenMP default
  bool emit_trajectories = false;
  std::string preset;  // set when invoked through a preset name
  std::optional<std::uint64_t> seed_override;
  std::optional<long long> n_traj_override;
};

// Runs every config in the plan, writes results under out_dir plus a
// meta.json sidecar. Returns the process exit status.
int run_plan(std::vector<SimConfig> plan, const RunnerOptions& opt);

// Closed vs open exact propagation, a single unraveling, and the derived
// localization numbers for the driven-condensate reference configuration.
struct Fig1Summary {
  TimeSeries closed, open;
  TrajectoryResult trajectory;
  double open_closed_max_dev = 0.0;  // in <J_i>/j units
  double min_unitary_purity = 0.0;
  double trajectory_purity_median_late = 0.0;
  double purity_ratio = 0.0;
  double est_configs_delocalized = 0.0;
  double est_configs_trajectory = 0.0;
  double transient_cut = 2.0;
  bool have_compare = false;
  UnravelingReport compare;
};
Fig1Summary run_fig1_study(const SimConfig& base, bool with_compare);

// Late-time localization level of one sweep member and the 1 - f/j fit.
struct Fig2Point {
  double j = 0.0;
  double late_mean_purity = 0.0;
  double f = 0.0;
  long long n_traj = 0;
};
Fig2Point summarize_fig2_point(double j, const EnsembleResult& ens,
                               double window_start);
// Zero-intercept least squares of (1 - purity) on 1/j over points with
// j >= min_j.
double fit_fig2_f(const std::vector<Fig2Point>& points, double min_j);

// CSV writers; 17 significant digits, byte-stable across reruns.
// Angular-momentum columns are normalized (<J_i>/j) throughout.
void write_exact_csv(const std::string& path, const TimeSeries& ts);
void write_ensemble_csv(const std::string& path, const EnsembleResult& ens);
void write_trajectory_csv(const std::string& path, const TrajectoryResult& tr);

}
