#include "casimir/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "casimir/analysis.hpp"
#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir::cli {

namespace {

constexpr double micrometre = 1e-6;
constexpr double nanometre = 1e-9;

std::string format(const char* spec, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, spec, value);
  return buffer;
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
  case Mode::force: return "force";
  case Mode::factor: return "factor";
  case Mode::compare: return "compare";
  case Mode::fit: return "fit";
  case Mode::verify: return "verify";
  }
  return "?";
}

void write_metadata(const RunConfig& config, const ResolvedRun& run, std::ostream& out) {
  out << "# casimir_cli mode=" << mode_name(config.mode) << " geometry=" << to_string(config.geometry)
      << " material=" << config.material;
  if (run.series_wavelength) out << " lambda_p_nm=" << format("%.6g", *run.series_wavelength / nanometre);
  if (config.table_path) out << " table=" << *config.table_path;
  if (config.geometry == GeometryKind::sphere) out << " radius_um=" << format("%.6g", config.radius_um);
  out << " a_min_um=" << format("%.6g", config.a_min_um)
      << " a_max_um=" << format("%.6g", config.a_max_um.value_or(config.a_min_um)) << " points=" << config.points
      << " spacing=" << (config.log_spacing ? "log" : "linear") << " order=" << config.order
      << " rel_tol=" << format("%.3g", config.rel_tol) << " abs_tol=" << format("%.3g", config.abs_tol) << "\n";
  out << "# constants " << constants::version_tag << "\n";
}

SeriesCoefficients plate_targets(const RunConfig& config) {
  SeriesCoefficients c = series_coefficients(GeometryKind::plates);
  if (config.inject_c3) c.c[2] = *config.inject_c3;
  return c;
}

double series_ratio(const ResolvedRun& run, double a) {
  return run.series_wavelength ? *run.series_wavelength / (2.0 * constants::pi) / a : 0.0;
}

} // namespace

std::optional<double> preset_wavelength_nm(const std::string& material) {
  if (material == "al") return 98.0;
  if (material == "cu" || material == "au") return 132.0;
  return std::nullopt;
}

ResolvedRun resolve(const RunConfig& config) {
  ResolvedRun run{IdealConductor{}, std::nullopt, {}, config.radius_um * micrometre, {}, {}};

  const bool preset = preset_wavelength_nm(config.material).has_value();
  if (!preset && config.material != "custom")
    throw UsageError("unknown material '" + config.material + "' (expected al, cu, au or custom)");

  std::optional<double> lambda_nm = config.lambda_p_nm ? config.lambda_p_nm : preset_wavelength_nm(config.material);
  if (lambda_nm && !(*lambda_nm > 0.0 && std::isfinite(*lambda_nm)))
    throw UsageError("--lambda-p must be positive, got " + format("%g", *lambda_nm));

  if (config.table_path) {
    std::ifstream in(*config.table_path);
    if (!in) throw UsageError("cannot open permittivity table '" + *config.table_path + "'");
    try {
      run.model = TabulatedModel(load_table(in, TailPolicy{config.lower_tail, config.upper_tail}));
    } catch (const ValidationError& e) {
      throw UsageError(*config.table_path + ": " + e.what());
    }
  } else if (lambda_nm) {
    run.model = PlasmaModel(*lambda_nm * nanometre);
  } else {
    throw UsageError("material custom needs --lambda-p or --table");
  }
  if (lambda_nm) run.series_wavelength = *lambda_nm * nanometre;

  if (config.points < 1) throw UsageError("--points must be at least 1");
  const double a_max = config.a_max_um.value_or(config.a_min_um);
  if (!(config.a_min_um > 0.0) || !(a_max >= config.a_min_um))
    throw UsageError("separation range needs 0 < a-min <= a-max");
  if (config.points > 1 && a_max == config.a_min_um)
    throw UsageError("--points > 1 needs a-max > a-min");
  if (config.points == 1 && a_max != config.a_min_um)
    throw UsageError("a range with a single point; pass --points");
  if (config.order < 0 || config.order > 4) throw UsageError("--order must be in 0..4");
  if (config.geometry == GeometryKind::sphere && !(config.radius_um > 0.0))
    throw UsageError("--radius must be positive");

  if (config.log_spacing) {
    run.a_grid = log_grid(config.a_min_um, a_max, static_cast<std::size_t>(config.points));
  } else {
    run.a_grid.resize(static_cast<std::size_t>(config.points));
    for (int i = 0; i < config.points; ++i)
      run.a_grid[static_cast<std::size_t>(i)] =
          config.points == 1 ? config.a_min_um
                             : config.a_min_um + (a_max - config.a_min_um) * i / (config.points - 1);
  }
  for (double& a : run.a_grid) a *= micrometre;

  run.settings.rel_tol = config.rel_tol;
  run.settings.abs_tol = config.abs_tol;
  try {
    run.settings.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (config.geometry == GeometryKind::sphere) {
    for (const double a : run.a_grid) {
      if (auto warning = check_geometry(SpherePlate{a, run.radius})) {
        run.warnings.push_back(*warning);
        break;
      }
    }
  }
  if (std::holds_alternative<TabulatedModel>(run.model) && !run.series_wavelength &&
      (config.mode == Mode::compare || config.mode == Mode::factor))
    throw UsageError("series columns for tabulated data need --lambda-p");
  return run;
}

int cmd_sweep(const RunConfig& config, const ResolvedRun& run, std::ostream& out) {
  write_metadata(config, run, out);
  bool any_failed = false;

  if (config.mode == Mode::compare) {
    const auto rows = compare_series_vs_exact(run.model, config.geometry, run.a_grid, run.settings,
                                              run.series_wavelength.value_or(0.0));
    out << "a_um,factor_exact,factor_order4,factor_order2,dev4,dev2,warn\n";
    for (const auto& row : rows) {
      any_failed = any_failed || row.failed;
      out << format("%.6g", row.a / micrometre) << ',' << format("%.9f", row.exact) << ','
          << format("%.9f", row.order4) << ',' << format("%.9f", row.order2) << ',' << format("%.3e", row.dev4)
          << ',' << format("%.3e", row.dev2) << ',' << row.warning << "\n";
      if (row.failed) out << "# failed a_um=" << format("%.6g", row.a / micrometre) << ": " << row.message << "\n";
    }
    return any_failed ? exit_failure : exit_ok;
  }

  out << "a_um,delta0_over_a,factor_exact,factor_series,error\n";
  for (const double a : run.a_grid) {
    const double ratio = series_ratio(run, a);
    const double series = correction_factor_series(config.geometry, ratio, config.order).value;
    try {
      const ForceResult r = config.geometry == GeometryKind::plates
                                ? pressure_plates_exact(run.model, a, run.settings)
                                : force_sphere_exact(run.model, a, run.radius, run.settings);
      out << format("%.6g", a / micrometre) << ',' << format("%.6e", ratio) << ','
          << format("%.9f", r.correction_factor) << ',' << format("%.9f", series) << ','
          << format("%.2e", std::abs(r.error / r.ideal)) << "\n";
    } catch (const ConvergenceError& e) {
      any_failed = true;
      out << format("%.6g", a / micrometre) << ',' << format("%.6e", ratio) << ",nan," << format("%.9f", series)
          << ",nan\n# failed a_um=" << format("%.6g", a / micrometre) << ": " << e.what() << "\n";
    }
  }
  return any_failed ? exit_failure : exit_ok;
}

int cmd_force(const RunConfig& config, const ResolvedRun& run, std::ostream& out) {
  for (const double a : run.a_grid) {
    const bool plates = config.geometry == GeometryKind::plates;
    const ForceResult r = plates ? pressure_plates_exact(run.model, a, run.settings)
                                 : force_sphere_exact(run.model, a, run.radius, run.settings);
    out << "a_um=" << format("%.6g", a / micrometre) << " force=" << format("%.9e", r.value)
        << " unit=" << (plates ? "Pa" : "N") << " factor=" << format("%.9f", r.correction_factor)
        << " ideal=" << format("%.9e", r.ideal) << " error=" << format("%.2e", r.error) << "\n";
  }
  return exit_ok;
}

int cmd_fit(const RunConfig& config, const ResolvedRun& run, std::ostream& out) {
  write_metadata(config, run, out);
  QuadratureSettings settings = run.settings;
  settings.rel_tol = std::min(settings.rel_tol, 1e-12);
  settings.abs_tol = std::min(settings.abs_tol, 1e-16);
  const auto points = static_cast<std::size_t>(std::max<int>(config.points, static_cast<int>(fit_min_points)));
  const FitReport report = extract_coefficients(config.geometry, log_grid(0.002, fit_ratio_limit, points), settings);
  const SeriesCoefficients exact = series_coefficients(config.geometry);
  out << "# residual_norm=" << format("%.3e", report.residual_norm) << "\n";
  out << "k,fitted,uncertainty,closed_form,relative_deviation\n";
  for (int k = 0; k < 4; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out << k + 1 << ',' << format("%.9g", report.coefficients(k)) << ',' << format("%.3e", report.uncertainty(k))
        << ',' << format("%.9g", exact.c[i]) << ','
        << format("%.3e", std::abs(report.coefficients(k) / exact.c[i] - 1.0)) << "\n";
  }
  return exit_ok;
}

int cmd_verify(const RunConfig& config, const ResolvedRun& run, std::ostream& out) {
  bool all_pass = true;
  const auto line = [&](bool pass, const std::string& text) {
    all_pass = all_pass && pass;
    out << (pass ? "PASS " : "FAIL ") << text << "\n";
  };

  const SeriesCoefficients plates = plate_targets(config);
  const SeriesCoefficients sphere = series_coefficients(GeometryKind::sphere);

  for (const auto& r : pft_order_consistency(plates, sphere)) {
    const double scale = std::abs(sphere.c[static_cast<std::size_t>(r.order - 1)]);
    line(r.residual <= 1e-14 * scale,
         "pft_order k=" + std::to_string(r.order) + " residual=" + format("%.3e", r.residual));
  }

  // Log form against the integrated-by-parts form of the sphere-plate force.
  const double wavelength = run.series_wavelength.value_or(100 * nanometre);
  for (const double multiple : {1.0, 5.0, 30.0}) {
    const double a = multiple * wavelength;
    const std::string where = "a_um=" + format("%.6g", a / micrometre);
    try {
      const double radius = std::max(run.radius, default_min_radius_ratio * a);
      const ForceResult d = force_sphere_exact(run.model, a, radius, run.settings, SphereRoute::derivative);
      const ForceResult l = force_sphere_exact(run.model, a, radius, run.settings, SphereRoute::log_form);
      const double difference = std::abs(d.value - l.value);
      const double bound = 10.0 * (d.error + l.error);
      line(difference <= bound, "sphere_routes " + where + " |diff|=" + format("%.3e", difference) +
                                    " bound=" + format("%.3e", bound));
    } catch (const std::exception& e) {
      line(false, "sphere_routes " + where + " " + e.what());
    }
  }

  QuadratureSettings fit_settings = run.settings;
  fit_settings.rel_tol = std::min(fit_settings.rel_tol, 1e-12);
  fit_settings.abs_tol = std::min(fit_settings.abs_tol, 1e-16);
  constexpr std::array<double, 4> tolerance = {0.01, 0.02, 0.10, 0.25};
  for (const GeometryKind geometry : {GeometryKind::plates, GeometryKind::sphere}) {
    SeriesCoefficients target = geometry == GeometryKind::plates ? plates : sphere;
    try {
      const FitReport fit = extract_coefficients(geometry, log_grid(0.002, fit_ratio_limit, 8), fit_settings);
      for (int k = 0; k < 4; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double deviation = std::abs(fit.coefficients(k) / target.c[i] - 1.0);
        line(deviation <= tolerance[i], "coefficient " + std::string(to_string(geometry)) + " c" +
                                            std::to_string(k + 1) + " fitted=" + format("%.6g", fit.coefficients(k)) +
                                            " target=" + format("%.6g", target.c[i]) +
                                            " deviation=" + format("%.3e", deviation));
      }
    } catch (const std::exception& e) {
      line(false, "coefficient " + std::string(to_string(geometry)) + " " + e.what());
    }
  }
  return all_pass ? exit_ok : exit_failure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Casimir forces between real metals: exact Lifshitz integrals and perturbation series", "casimir_cli"};

  std::string geometry = "plates";
  std::string mode = "force";
  bool linear = false;
  app.add_option("--geometry", geometry, "plates | sphere")->check(CLI::IsMember({"plates", "sphere"}));
  app.add_option("--material", config.material, "al | cu | au | custom");
  app.add_option("--lambda-p", config.lambda_p_nm, "plasma wavelength in nm (overrides the preset)");
  app.add_option("--table", config.table_path, "permittivity CSV (omega_rad_s,eps_imag)");
  app.add_flag("!--no-lower-tail", config.lower_tail, "disable the 1/omega tail below the table");
  app.add_flag("!--no-upper-tail", config.upper_tail, "disable the 1/omega^3 tail above the table");
  app.add_option("--radius", config.radius_um, "sphere radius in um");
  app.add_option("--a-min", config.a_min_um, "smallest separation in um");
  app.add_option("--a-max", config.a_max_um, "largest separation in um");
  app.add_option("--points", config.points, "number of grid points");
  auto* log_flag = app.add_flag("--log", config.log_spacing, "log-spaced grid");
  app.add_flag("--linear", linear, "linearly spaced grid (default)")->excludes(log_flag);
  app.add_option("--order", config.order, "series order 0..4");
  app.add_option("--rel-tol", config.rel_tol, "quadrature relative tolerance");
  app.add_option("--abs-tol", config.abs_tol, "quadrature absolute tolerance");
  app.add_option("--output", config.output, "write to this file instead of stdout");
  app.add_option("--mode", mode, "force | factor | compare | fit | verify")
      ->check(CLI::IsMember({"force", "factor", "compare", "fit", "verify"}));
  app.add_option("--inject-c3", config.inject_c3)->group(""); // fault injection for verify

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  config.geometry = geometry == "sphere" ? GeometryKind::sphere : GeometryKind::plates;
  if (mode == "factor") config.mode = Mode::factor;
  else if (mode == "compare") config.mode = Mode::compare;
  else if (mode == "fit") config.mode = Mode::fit;
  else if (mode == "verify") config.mode = Mode::verify;

  ResolvedRun resolved{IdealConductor{}, std::nullopt, {}, 0.0, {}, {}};
  try {
    resolved = resolve(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  for (const auto& warning : resolved.warnings) err << "warning: " << warning << "\n";

  std::ofstream file;
  if (config.output) {
    file.open(*config.output);
    if (!file) {
      err << "error: cannot open output file '" << *config.output << "'\n";
      return exit_usage;
    }
  }
  std::ostream& sink = config.output ? static_cast<std::ostream&>(file) : out;

  try {
    int code = exit_ok;
    switch (config.mode) {
    case Mode::force: code = cmd_force(config, resolved, sink); break;
    case Mode::factor:
    case Mode::compare: code = cmd_sweep(config, resolved, sink); break;
    case Mode::fit: code = cmd_fit(config, resolved, sink); break;
    case Mode::verify: code = cmd_verify(config, resolved, sink); break;
    }
    if (code != exit_ok) err << "error: " << mode << " reported failures\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

} // namespace casimir::cli
