#include "jumpproc/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "jumpproc/bsde.hpp"
#include "jumpproc/control.hpp"
#include "jumpproc/pde.hpp"
#include "jumpproc/simulate.hpp"

namespace jumpproc {

namespace {

RunParams resolve(const ProblemSpec& spec, const CliOverrides& ov) {
  RunParams run = spec.run;
  if (ov.seed) run.seed = *ov.seed;
  if (ov.n_paths) run.n_paths = *ov.n_paths;
  if (ov.step) run.step = *ov.step;
  if (ov.start_time) run.start_time = *ov.start_time;
  if (ov.start_state) run.start_state = *ov.start_state;
  return run;
}

void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open output file: " + path.string());
  writer(os);
  if (!os) throw IoError("failed writing output file: " + path.string());
}

const Driver& require_driver(const ProblemSpec& spec) {
  if (!spec.has_driver())
    throw ValidationError("this command needs a driver section");
  return *spec.driver;
}

const ControlModel& require_control(const ProblemSpec& spec) {
  if (!spec.has_control())
    throw ValidationError("this command needs a control section");
  return *spec.control;
}

// Residual tolerance for the trapezoidal a posteriori certificate of an
// RK4-solved table.
double residual_tolerance(const Model& model, const ValueFunction& v) {
  const double scale = std::max(1.0, v.table().cwiseAbs().maxCoeff());
  return 100.0 * v.step() * v.step() * scale *
         std::max(1.0, model.lambda_bound());
}

CheckRecord residual_check(const Model& model, const Driver& driver,
                           const Vector& g, const ValueFunction& v) {
  CheckRecord c;
  c.name = "residual_norm";
  c.lhs = residual_norm(model, driver, g, v);
  c.rhs = 0.0;
  c.gap = c.lhs;
  c.tolerance = residual_tolerance(model, v);
  c.pass = c.lhs <= c.tolerance;
  return c;
}

CheckRecord martingale_check(const std::string& name, std::uint64_t stream,
                             const Model& model, const Integrand& H,
                             const Quadrature& quad, const RunParams& run) {
  const MeanSE m =
      martingale_mean(model, H, run.start_time, run.start_state, run.n_paths,
                      RngStream(run.seed, stream), quad);
  CheckRecord c;
  c.name = name;
  c.lhs = m.mean;
  c.rhs = 0.0;
  c.gap = m.mean;
  c.se = m.se;
  c.n_paths = run.n_paths;
  c.tolerance = 3.0 * m.se;
  c.pass = std::abs(m.mean) <= c.tolerance;
  return c;
}

void verify_checks(const ProblemSpec& spec, const RunParams& run,
                   RunReport& report) {
  const Model& model = spec.model;
  const double h = run.step;

  report.checks.push_back(martingale_check(
      "compensator_constant", 101, model, [](double, State) { return 1.0; },
      Quadrature::cell_exact(), run));
  report.checks.push_back(martingale_check(
      "compensator_indicator", 102, model,
      [](double, State y) { return y == 0 ? 1.0 : 0.0; },
      Quadrature::cell_exact(), run));
  report.checks.push_back(martingale_check(
      "compensator_time_weighted", 103, model,
      [](double s, State y) { return s * (1.0 + y); }, Quadrature::subgrid(h),
      run));

  if (spec.has_driver()) {
    const Driver& driver = *spec.driver;
    ValueFunction v = solve_kolmogorov(model, driver, spec.terminal, h);
    report.checks.push_back(residual_check(model, driver, spec.terminal, v));

    const int n_resid = std::min(run.n_paths, 100);
    double worst_bsde = 0.0, worst_ito = 0.0;
    RngStream base(run.seed, 110);
    for (int i = 0; i < n_resid; ++i) {
      RngStream stream = base.child(i);
      const MarkedPath path =
          simulate_path(model, run.start_time, run.start_state, stream);
      worst_bsde = std::max(worst_bsde, bsde_residual(model, driver, v, path));
      worst_ito = std::max(worst_ito, verify_ito(model, v, path));
    }
    const double tol = residual_tolerance(model, v);
    report.checks.push_back({"bsde_residual", worst_bsde, 0.0, worst_bsde, 0.0,
                             n_resid, tol, worst_bsde <= tol});
    report.checks.push_back({"ito_formula", worst_ito, 0.0, worst_ito, 0.0,
                             n_resid, tol, worst_ito <= tol});

    // Energy identity on the linear problem with source f(., ., 0, 0).
    const Vector zeros = Vector::Zero(model.n_states());
    const SourceTerm source = [&](double s, State x) {
      const int cell = s < model.horizon() ? model.cell_index(s)
                                           : model.n_cells() - 1;
      return driver.eval(model, cell, s, x, 0.0, zeros);
    };
    const Driver linear = Driver::custom_cell_aware(
        [&driver, &zeros](const Model& m, int cell, double s, State x, double,
                          const Vector&) {
          return driver.eval(m, cell, s, x, 0.0, zeros);
        },
        0.0, 0.0);
    ValueFunction v_lin = solve_kolmogorov(model, linear, spec.terminal, h);
    for (double beta : {0.0, 2.0}) {
      const EnergyGap e = energy_identity_gap(
          model, v_lin, source, run.start_time, run.start_state, beta,
          std::max(run.n_paths, 100), RngStream(run.seed, 120 + (beta > 0)));
      CheckRecord c;
      c.name = beta == 0.0 ? "energy_identity_beta0" : "energy_identity_beta2";
      c.lhs = e.lhs;
      c.rhs = e.rhs;
      c.gap = e.gap;
      c.se = e.se;
      c.n_paths = e.n_paths;
      c.tolerance = 3.0 * e.se + 10.0 * h * h;
      c.pass = std::abs(e.gap) <= c.tolerance;
      report.checks.push_back(c);
    }
  }

  if (spec.has_control()) {
    const ControlModel& control = *spec.control;
    auto [v, policy] = solve_hjb(model, control, h);

    RunningStat weight;
    RngStream base(run.seed, 130);
    for (int i = 0; i < run.n_paths; ++i) {
      RngStream stream = base.child(i);
      const MarkedPath path =
          simulate_path(model, run.start_time, run.start_state, stream);
      weight.add(girsanov_weight(model, control, policy, path).terminal);
    }
    CheckRecord gw;
    gw.name = "girsanov_mean_weight";
    gw.lhs = weight.mean();
    gw.rhs = 1.0;
    gw.gap = weight.mean() - 1.0;
    gw.se = weight.se();
    gw.n_paths = run.n_paths;
    gw.tolerance = 3.0 * weight.se();
    gw.pass = std::abs(gw.gap) <= gw.tolerance;
    report.checks.push_back(gw);

    const FundamentalGap fg =
        fundamental_gap(model, control, policy, v, run.start_time,
                        run.start_state, run.n_paths, RngStream(run.seed, 140));
    CheckRecord fc;
    fc.name = "fundamental_gap_optimal";
    fc.lhs = fg.gap;
    fc.rhs = 0.0;
    fc.gap = fg.gap;
    fc.se = fg.se;
    fc.n_paths = fg.n_paths;
    fc.tolerance = std::max(3.0 * fg.se, 10.0 * h);
    fc.pass = std::abs(fg.gap) <= fc.tolerance;
    report.checks.push_back(fc);

    CheckRecord vc;
    vc.name = "fundamental_value_match";
    vc.lhs = v.value(run.start_time, run.start_state);
    vc.rhs = fg.value_check;
    vc.gap = vc.lhs - vc.rhs;
    vc.se = fg.value_check_se;
    vc.n_paths = fg.n_paths;
    vc.tolerance = 3.0 * fg.value_check_se + 10.0 * h;
    vc.pass = std::abs(vc.gap) <= vc.tolerance;
    report.checks.push_back(vc);
  }
}

}  // namespace

RunReport run_command(const std::string& command, const ProblemSpec& spec,
                      const CliOverrides& ov) {
  const auto t_start = std::chrono::steady_clock::now();
  const RunParams run = resolve(spec, ov);
  const Model& model = spec.model;

  if (!ov.out_dir.empty()) std::filesystem::create_directories(ov.out_dir);

  RunReport report;
  report.command = command;
  report.spec_hash = spec.spec_hash;
  report.seed = run.seed;

  if (command == "solve") {
    const Driver& driver = require_driver(spec);
    ValueFunction v = solve_kolmogorov(model, driver, spec.terminal, run.step);
    write_file(ov.out_dir, "value.csv",
               [&](std::ostream& os) { write_value_csv(v, os); });
    report.checks.push_back(residual_check(model, driver, spec.terminal, v));
  } else if (command == "solve-hjb") {
    const ControlModel& control = require_control(spec);
    auto [v, policy] = solve_hjb(model, control, run.step);
    write_file(ov.out_dir, "value.csv",
               [&](std::ostream& os) { write_value_csv(v, os); });
    write_file(ov.out_dir, "policy.csv",
               [&](std::ostream& os) { write_policy_csv(policy, os); });
    const Driver driver = Driver::hamiltonian(
        model, std::shared_ptr<const ControlModel>(spec.control));
    report.checks.push_back(
        residual_check(model, driver, control.terminal_cost(), v));
  } else if (command == "simulate") {
    std::vector<MarkedPath> paths;
    paths.reserve(run.n_paths);
    RunningStat jumps;
    RngStream base(run.seed, 301);
    for (int i = 0; i < run.n_paths; ++i) {
      RngStream stream = base.child(i);
      paths.push_back(
          simulate_path(model, run.start_time, run.start_state, stream));
      jumps.add(paths.back().n_jumps());
    }
    write_file(ov.out_dir, "paths.csv",
               [&](std::ostream& os) { write_paths_csv(paths, os); });
    CheckRecord c;
    c.name = "jump_count_bound";
    c.lhs = jumps.mean();
    c.rhs = model.lambda_bound() * (model.horizon() - run.start_time);
    c.gap = c.lhs - c.rhs;
    c.se = jumps.se();
    c.n_paths = run.n_paths;
    c.tolerance = 3.0 * jumps.se();
    c.pass = c.lhs <= c.rhs + c.tolerance;
    report.checks.push_back(c);
  } else if (command == "evaluate-policy") {
    const ControlModel& control = require_control(spec);
    FeedbackPolicy policy = [&] {
      if (!ov.policy_path.empty()) {
        std::ifstream is(ov.policy_path);
        if (!is) throw ParseError("cannot open policy file: " + ov.policy_path);
        return read_policy_csv(is, model.breakpoints(), model.n_states());
      }
      return solve_hjb(model, control, run.step).second;
    }();
    write_file(ov.out_dir, "policy.csv",
               [&](std::ostream& os) { write_policy_csv(policy, os); });
    const MeanSE direct =
        cost_direct(model, control, policy, run.start_time, run.start_state,
                    run.n_paths, RngStream(run.seed, 201));
    const MeanSE reweighted =
        cost_reweighted(model, control, policy, run.start_time,
                        run.start_state, run.n_paths, RngStream(run.seed, 202));
    CheckRecord c;
    c.name = "estimator_agreement";
    c.lhs = direct.mean;
    c.rhs = reweighted.mean;
    c.gap = direct.mean - reweighted.mean;
    c.se = std::sqrt(direct.se * direct.se + reweighted.se * reweighted.se);
    c.n_paths = run.n_paths;
    c.tolerance = 3.0 * c.se;
    c.pass = std::abs(c.gap) <= c.tolerance;
    report.checks.push_back(c);
  } else if (command == "verify") {
    verify_checks(spec, run, report);
  } else if (command == "reduce") {
    if (!spec.reduction)
      throw ValidationError("the reduce command needs a reduction section");
    auto [r, r_bound] = reduce_model(*spec.reduction, model);
    write_file(ov.out_dir, "r_tensor.csv",
               [&](std::ostream& os) { write_r_tensor_csv(r, os); });
    CheckRecord c;
    c.name = "r_bound";
    c.lhs = r_bound;
    c.rhs = r_bound;
    c.pass = std::isfinite(r_bound);
    report.checks.push_back(c);
  } else {
    throw ValidationError("unknown command: " + command);
  }

  const std::string report_name =
      ov.format == "csv" ? "report.csv" : "report.json";
  write_file(ov.out_dir, report_name, [&](std::ostream& os) {
    emit_report(report, ov.format, os);
  });

  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  return report;
}

}  // namespace jumpproc
