#pragma once

#include "fracperim/deficit.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/shape.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace fracperim {

/// Flat key-value run configuration (`key = value`, `#` comments, lists
/// comma-separated).
struct ExperimentConfig {
  int dim = 2;
  std::vector<double> s_list{0.5};
  std::vector<double> h_list{1.0 / 32};
  std::vector<std::string> families{"ellipse-ecc"};
  std::vector<double> params;  ///< family parameters; empty selects the family default
  int margin = 4;
  int cutoff = 16;
  int threads = 1;
  std::string out;
  std::string cache_dir;
  std::uint64_t seed = 12345;
  double tolerance = 1e-4;     ///< relative tolerance of the closed-form checks
  double tamper_factor = 1.0;  ///< multiplies the nearest-neighbour table entry in verify runs

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  /// Sets one key from its text value; throws Parse on unknown keys.
  void set(const std::string& key, const std::string& value);
  void validate() const;
};

struct FamilyMember {
  std::string family;
  double param = 0.0;
  ShapeSpec shape;
  std::string id() const;
};

/// Families normalized to the unit-ball volume (r = 1):
///   ellipse-ecc   a/b = 1 + t
///   fourier-disk  r0 (1 + t cos 3θ)
///   dumbbell      disks of radius 1 with centers 2(1.1 + t) apart, neck 0.5
///   two-balls     two equal balls whose centers are 2ρ + t apart
///   offset-bump   unit disk plus a disk of radius t centered on its boundary
///   two-intervals (-1 - t/2, -t/2) ∪ (t/2, 1 + t/2)
/// `min_h` > 0 additionally requires dumbbell necks wider than 2 min_h.
std::vector<FamilyMember> generate_family(const std::string& name, const std::vector<double>& params, int dim = 2,
                                          double min_h = 0.0);
std::vector<double> default_family_params(const std::string& name);
std::vector<std::string> family_names();

/// Tables built once per (N, s, h) and shared across a run.
class TableCache {
 public:
  TableCache(int cutoff = 16, std::string cache_dir = {}, double tamper_factor = 1.0);
  const InteractionTable& get(const KernelParams& params, double h);

 private:
  int cutoff_;
  std::string cache_dir_;
  double tamper_;
  std::map<std::tuple<int, double, double>, std::unique_ptr<InteractionTable>> tables_;
};

GridSet rasterize_shape(const ShapeSpec& shape, double h, int margin);

struct SweepRecord {
  std::string id;
  std::string family;
  double param = 0.0;
  int dim = 0;
  double s = 0.0;
  double h = 0.0;
  double Ps = 0.0;
  double Ds = 0.0;
  double A = 0.0;
  double error_budget = 0.0;
  double theorem_ratio = 0.0;  ///< A / D_s^{s/4}
  double high_ratio = 0.0;     ///< (1 - s) P_s / P(E)
  double low_ratio = 0.0;      ///< s P_s / (N |B| |E|)
  std::vector<std::string> flags;
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRecord& r);

SweepRecord evaluate_member(const FamilyMember& m, const KernelParams& params, double h, TableCache& tables,
                            int margin, int threads);

struct SweepResult {
  std::vector<SweepRecord> records;
  double k_estimate = 0.0;  ///< mean (1 - s) P_s / P over the shapes at the largest s
};

/// One record per (family member, s, h) in (family, param, s, h) order.
SweepResult sweep_s(const ExperimentConfig& config);

struct FamilyFit {
  std::string family;
  double s = 0.0;
  double slope = 0.0;      ///< least-squares slope of log A against log D_s
  double max_ratio = 0.0;  ///< max A / D_s^{s/4} over fitted records
  int points = 0;
  bool bounded = true;  ///< no monotone growth of the ratio as D_s decreases
  std::vector<std::string> flags;
};

struct ExponentStudy {
  std::vector<SweepRecord> records;
  std::vector<FamilyFit> fits;
};

/// Records with 0 < D_s <= 1, D_s above twice its error budget and A > 0
/// enter the fit; fewer than 4 such points flag the fit `degenerate_fit`.
ExponentStudy exponent_study(const ExperimentConfig& config);
FamilyFit fit_family(const std::vector<SweepRecord>& records, const std::string& family, double s);

std::string fit_csv_header();
std::string fit_csv_row(const FamilyFit& f);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Runs every module check at pinned resolutions; failures are collected.
std::vector<CheckResult> verify_suite(const ExperimentConfig& config);
std::string check_csv_header();
std::string check_csv_row(const CheckResult& c);

}  // namespace fracperim
