#include "fracperim/deficit.hpp"
#include "fracperim/error.hpp"
#include "fracperim/experiments.hpp"
#include "fracperim/extension.hpp"
#include "fracperim/grid_geometry.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/rearrange.hpp"
#include "fracperim/shape.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace fracperim;

namespace {

struct Options {
  std::string config;
  std::optional<std::string> n, s, h, margin, cutoff, threads, out, family, params, seed, tamper;
  std::string shape;
  std::string grid;
  std::string input;
  std::string id;
  std::string field_out;
  std::string fit_out;
  ExtensionSettings extension;
};

ExperimentConfig make_config(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(o.config);
  auto apply = [&](const char* key, const std::optional<std::string>& v) {
    if (v) cfg.set(key, *v);
  };
  apply("n", o.n);
  apply("s", o.s);
  apply("h", o.h);
  apply("margin", o.margin);
  apply("cutoff", o.cutoff);
  apply("threads", o.threads);
  apply("out", o.out);
  apply("family", o.family);
  apply("params", o.params);
  apply("seed", o.seed);
  apply("tamper_factor", o.tamper);
  cfg.validate();
  return cfg;
}

// Output stream: the --out file when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::Io, "cannot write " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

GridSet load_set(const Options& o, const ExperimentConfig& cfg) {
  if (!o.grid.empty()) {
    std::ifstream in(o.grid);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + o.grid);
    return read_grid_set(in);
  }
  if (o.shape.empty()) throw Error(ErrorCode::InvalidParameter, "give --shape or --grid");
  const ShapeSpec shape = ShapeSpec::parse(o.shape);
  if (shape.dim() != cfg.dim) throw Error(ErrorCode::InvalidParameter, "shape dimension differs from --n");
  return rasterize_shape(shape, cfg.h_list.front(), cfg.margin);
}

std::string set_id(const Options& o) {
  if (!o.id.empty()) return o.id;
  return o.grid.empty() ? "shape" : o.grid;
}

std::string f17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_perim(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const GridSet e = load_set(o, cfg);
  TableCache tables(cfg.cutoff, cfg.cache_dir);
  const KernelParams params{e.spec().dim, cfg.s_list.front()};
  const PerimeterBreakdown b =
      fractional_perimeter_breakdown(e, tables.get(params, e.spec().h), cfg.margin, cfg.threads);
  Sink sink(cfg.out);
  sink.get() << "id,N,s,h,Ps,pair_sum,tail,quad_bound\n"
             << set_id(o) << ',' << params.dim << ',' << f17(params.s) << ',' << f17(e.spec().h) << ','
             << f17(b.value) << ',' << f17(b.pair_sum) << ',' << f17(b.tail) << ',' << f17(b.quadrature_bound)
             << '\n';
  return 0;
}

int cmd_asym(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const GridSet e = load_set(o, cfg);
  const Asymmetry a = fraenkel_asymmetry(e);
  Sink sink(cfg.out);
  sink.get() << "id,N,h,r,A,cx,cy\n"
             << set_id(o) << ',' << e.spec().dim << ',' << f17(e.spec().h) << ',' << f17(equivalent_radius(e)) << ','
             << f17(a.A) << ',' << f17(a.center[0]) << ',' << f17(a.center[1]) << '\n';
  return 0;
}

int cmd_deficit(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const GridSet e = load_set(o, cfg);
  TableCache tables(cfg.cutoff, cfg.cache_dir);
  DeficitOptions options;
  options.margin = cfg.margin;
  options.threads = cfg.threads;
  options.id = set_id(o);
  const DeficitReport r = s_deficit(e, tables.get({e.spec().dim, cfg.s_list.front()}, e.spec().h), options);
  Sink sink(cfg.out);
  sink.get() << deficit_csv_header() << '\n' << deficit_csv_row(r) << '\n';
  return 0;
}

int cmd_rearrange(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  GridFunction g = [&] {
    if (!o.input.empty()) {
      std::ifstream in(o.input);
      if (!in) throw Error(ErrorCode::Io, "cannot open " + o.input);
      return read_grid_function(in);
    }
    return GridFunction::indicator(load_set(o, cfg));
  }();
  const RearrangeReport r = polya_szego_report(g);
  if (!o.field_out.empty()) {
    std::ofstream out(o.field_out);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + o.field_out);
    write_grid_function(out, symmetric_rearrangement(g));
  }
  Sink sink(cfg.out);
  sink.get() << "id,N,h,l1_distance,support,energy_g,energy_gsharp,gap,symmetry_defect\n"
             << (o.input.empty() ? set_id(o) : o.input) << ',' << g.spec().dim << ',' << f17(g.spec().h) << ','
             << f17(r.l1_distance) << ',' << f17(r.support_measure) << ',' << f17(r.energy_g) << ','
             << f17(r.energy_gsharp) << ',' << f17(r.gap) << ',' << f17(r.symmetry_defect) << '\n';
  return r.gap >= 0.0 ? 0 : 1;
}

int cmd_extend(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const GridSet e = load_set(o, cfg);
  const KernelParams params{e.spec().dim, cfg.s_list.front()};
  const ExtensionSetup setup = prepare_extension(e, o.extension);
  const ExtensionField u = poisson_extend(setup.datum, setup.grid, params, cfg.threads);
  const ExtensionEnergy en = extension_energy(u);
  if (!o.field_out.empty()) {
    std::ofstream out(o.field_out);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + o.field_out);
    write_extension_field(out, u);
  }
  Sink sink(cfg.out);
  sink.get() << "id,N,s,h,energy,x_part,z_part,truncation_bound,truncation_warning\n"
             << set_id(o) << ',' << params.dim << ',' << f17(params.s) << ',' << f17(e.spec().h) << ','
             << f17(en.total) << ',' << f17(en.x_part) << ',' << f17(en.z_part) << ',' << f17(en.truncation_bound)
             << ',' << (en.truncation_warning ? 1 : 0) << '\n';
  if (en.truncation_warning) std::cerr << "warning: truncated energy exceeds 2% of the total\n";
  return 0;
}

int cmd_sweep(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const SweepResult res = sweep_s(cfg);
  Sink sink(cfg.out);
  sink.get() << sweep_csv_header() << '\n';
  for (const auto& r : res.records) sink.get() << sweep_csv_row(r) << '\n';
  std::cerr << "K_" << cfg.dim << " estimate: " << f17(res.k_estimate) << '\n';
  return 0;
}

int cmd_exponent(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const ExponentStudy study = exponent_study(cfg);
  Sink sink(cfg.out);
  sink.get() << sweep_csv_header() << '\n';
  for (const auto& r : study.records) sink.get() << sweep_csv_row(r) << '\n';
  Sink fits(o.fit_out);
  std::ostream& fit_stream = o.fit_out.empty() ? std::cerr : fits.get();
  fit_stream << fit_csv_header() << '\n';
  bool ok = true;
  for (const auto& f : study.fits) {
    fit_stream << fit_csv_row(f) << '\n';
    ok = ok && f.bounded;
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
  const ExperimentConfig cfg = make_config(o);
  const auto checks = verify_suite(cfg);
  Sink sink(cfg.out);
  sink.get() << check_csv_header() << '\n';
  bool ok = true;
  for (const auto& c : checks) {
    sink.get() << check_csv_row(c) << '\n';
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional perimeters, asymmetry and isoperimetric deficits of grid sets"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--config", o.config, "flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--n", o.n, "dimension (1 or 2)");
    sub->add_option("--s", o.s, "fractional order, or a comma list");
    sub->add_option("--h", o.h, "cell size, or a comma list (fractions like 1/128 allowed)");
    sub->add_option("--margin", o.margin, "empty cells around the set");
    sub->add_option("--cutoff", o.cutoff, "near-field table radius in cells");
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_option("--out", o.out, "CSV output path (default stdout)");
  };
  auto shape_input = [&](CLI::App* sub) {
    sub->add_option("--shape", o.shape, "shape, e.g. \"kind=ellipse a=1.2 b=0.8\"");
    sub->add_option("--grid", o.grid, "FRACGRID file")->check(CLI::ExistingFile);
    sub->add_option("--id", o.id, "identifier written to the CSV");
  };
  auto family_input = [&](CLI::App* sub) {
    sub->add_option("--family", o.family, "comma list of families");
    sub->add_option("--params", o.params, "comma list of family parameters");
  };

  auto* perim = app.add_subcommand("perim", "fractional s-perimeter");
  common(perim);
  shape_input(perim);
  auto* asym = app.add_subcommand("asym", "Fraenkel asymmetry");
  common(asym);
  shape_input(asym);
  auto* deficit = app.add_subcommand("deficit", "s-isoperimetric deficit report");
  common(deficit);
  shape_input(deficit);
  auto* rearrange = app.add_subcommand("rearrange", "symmetric decreasing rearrangement");
  common(rearrange);
  shape_input(rearrange);
  rearrange->add_option("--input", o.input, "FRACFUN file")->check(CLI::ExistingFile);
  rearrange->add_option("--field-out", o.field_out, "write the rearranged FRACFUN here");
  auto* extend = app.add_subcommand("extend", "Caffarelli-Silvestre extension energy");
  common(extend);
  shape_input(extend);
  extend->add_option("--field-out", o.field_out, "write the FRACEXT field here");
  extend->add_option("--z0-factor", o.extension.z0_factor, "lowest level z0 in units of h")->capture_default_str();
  extend->add_option("--rho", o.extension.rho, "geometric grading ratio of the z-levels")->capture_default_str();
  extend->add_option("--top-factor", o.extension.top_factor, "top level in units of diam(E)")->capture_default_str();
  extend->add_option("--lateral-factor", o.extension.lateral_factor, "lateral padding in units of diam(E)")
      ->capture_default_str();
  auto* sweep = app.add_subcommand("sweep-s", "s-sweep over shape families");
  common(sweep);
  family_input(sweep);
  auto* exponent = app.add_subcommand("exponent-study", "asymmetry against deficit fits");
  common(exponent);
  family_input(exponent);
  exponent->add_option("--fit-out", o.fit_out, "fit CSV path (default stderr)");
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  common(verify);
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--tamper", o.tamper, "scale the nearest-neighbour table entry (fault injection)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*perim) return cmd_perim(o);
    if (*asym) return cmd_asym(o);
    if (*deficit) return cmd_deficit(o);
    if (*rearrange) return cmd_rearrange(o);
    if (*extend) return cmd_extend(o);
    if (*sweep) return cmd_sweep(o);
    if (*exponent) return cmd_exponent(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
