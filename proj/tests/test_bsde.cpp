#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jumpproc/bsde.hpp"
#include "jumpproc/pde.hpp"
#include "jumpproc/simulate.hpp"
#include "support/benchmarks.hpp"

using namespace jumpproc;
using namespace testsupport;

TEST_CASE("yz view freezes Y and Z when the path never jumps") {
  const Model m = gentle_model();
  const ValueFunction v = solve_kolmogorov(
      m, gentle_affine_driver(m), gentle_terminal(), 1e-2);
  MarkedPath path;
  path.start_time = 0.0;
  path.start_state = 1;
  path.horizon = m.horizon();

  const PathYZ yz = yz_from_value(v, path);
  for (double s : {0.0, 0.31, 0.99}) {
    CHECK(yz.y_at(s) == v.value(s, 1));
    CHECK(yz.z_at(s, 0) == v.value(s, 0) - v.value(s, 1));
    CHECK(yz.z_at(s, 1) == 0.0);
  }
}

TEST_CASE("constant tables give constant Y and vanishing Z") {
  const Model m = two_state_model();
  const ValueFunction v = ValueFunction::from_function(
      1.0, 1e-2, 2, [](double, State) { return 4.2; });
  RngStream rng(3);
  const MarkedPath path = simulate_path(m, 0.0, 0, rng);
  const PathYZ yz = yz_from_value(v, path);
  for (double s : {0.1, 0.5, 0.9}) {
    CHECK(yz.y_at(s) == 4.2);
    CHECK(yz.z_field(s).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Y jumps by exactly Z at every jump time") {
  const Model m = three_state_model();
  const ValueFunction v = solve_kolmogorov(
      m, Driver::zero(), vec3(1.0, -0.5, 0.25), 1e-3);
  RngStream root(19);
  int jumps_seen = 0;
  for (int rep = 0; rep < 200; ++rep) {
    RngStream rng = root.child(rep);
    const MarkedPath path = simulate_path(m, 0.0, rep % 3, rng);
    const PathYZ yz = yz_from_value(v, path);
    for (int i = 0; i < path.n_jumps(); ++i) {
      const double s = path.jump_times[i];
      const double dy = yz.y_at(s) - yz.y_left(s);
      CHECK(dy == yz.z_at(s, path.marks[i]));  // same table lookups
      CHECK(yz.z_at(s, path.left_state(s)) == 0.0);
      ++jumps_seen;
    }
  }
  CHECK(jumps_seen > 100);
}

TEST_CASE("bsde residual vanishes identically for constant data") {
  const Model m = two_state_model();
  const Vector g = vec2(2.0, 2.0);
  const ValueFunction v = solve_kolmogorov(m, Driver::zero(), g, 1e-2);
  RngStream root(7);
  for (int rep = 0; rep < 20; ++rep) {
    RngStream rng = root.child(rep);
    const MarkedPath path = simulate_path(m, 0.0, 0, rng);
    CHECK(bsde_residual(m, Driver::zero(), v, path) <= 1e-13);
  }
}

TEST_CASE("bsde residual is discretization-small and shrinks with the step") {
  const Model m = gentle_model();
  const Driver driver = gentle_affine_driver(m);
  const Vector g = gentle_terminal();
  const ValueFunction v1 = solve_kolmogorov(m, driver, g, 1e-3);
  const ValueFunction v2 = solve_kolmogorov(m, driver, g, 5e-4);

  RngStream root(11);
  RunningStat coarse, fine;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    RngStream rng = root.child(rep);
    const MarkedPath path = simulate_path(m, 0.0, rep % 2, rng);
    const double r1 = bsde_residual(m, driver, v1, path);
    const double r2 = bsde_residual(m, driver, v2, path);
    coarse.add(r1);
    fine.add(r2);
    worst = std::max(worst, r1);
  }
  CHECK(worst <= 1e-6);
  CHECK(coarse.mean() / fine.mean() >= 3.5);
}

TEST_CASE("bsde residual detects a corrupted terminal value") {
  const Model m = gentle_model();
  const Driver driver = gentle_affine_driver(m);
  ValueFunction v = solve_kolmogorov(m, driver, gentle_terminal(), 1e-3);
  v.at(v.n_nodes() - 1, 1) += 1.0;  // perturb g(1)

  RngStream root(13);
  int hits = 0;
  for (int rep = 0; rep < 200; ++rep) {
    RngStream rng = root.child(rep);
    const MarkedPath path = simulate_path(m, 0.0, 0, rng);
    if (path.terminal_state() == 1) {
      CHECK(bsde_residual(m, driver, v, path) >= 0.5);
      ++hits;
    }
  }
  CHECK(hits > 10);
}

TEST_CASE("ito defect vanishes for constant and linear-in-t tables") {
  const Model m = two_cell_model();
  const ValueFunction flat = ValueFunction::from_function(
      2.0, 1e-2, 2, [](double, State) { return -1.3; });
  const ValueFunction ramp = ValueFunction::from_function(
      2.0, 1e-2, 2, [](double s, State) { return s; });
  RngStream root(17);
  for (int rep = 0; rep < 50; ++rep) {
    RngStream rng = root.child(rep);
    const MarkedPath path = simulate_path(m, 0.0, rep % 2, rng);
    CHECK(verify_ito(m, flat, path) <= 1e-12);
    CHECK(verify_ito(m, ramp, path) <= 1e-12);
  }
}

TEST_CASE("ito defect stays below the quadrature tolerance for s^2 w(x)") {
  const Model m = two_state_model();
  const double h = 1e-2;
  const Vector w = vec2(1.0, -2.0);
  const ValueFunction v = ValueFunction::from_function(
      1.0, h, 2, [&](double s, State x) { return s * s * w(x); });
  RngStream root(23);
  for (int rep = 0; rep < 100; ++rep) {
    RngStream rng = root.child(rep);
    const MarkedPath path = simulate_path(m, 0.0, rep % 2, rng);
    CHECK(verify_ito(m, v, path) <= 10.0 * h * h);
  }
}

TEST_CASE("energy identity is exact for zero data") {
  const Model m = two_state_model();
  const ValueFunction v = ValueFunction::from_function(
      1.0, 1e-2, 2, [](double, State) { return 0.0; });
  const EnergyGap e = energy_identity_gap(
      m, v, [](double, State) { return 0.0; }, 0.0, 0, 0.0, 200,
      RngStream(31));
  CHECK(e.lhs == 0.0);
  CHECK(e.rhs == 0.0);
  CHECK(e.gap == 0.0);
  CHECK(e.se == 0.0);
}

TEST_CASE("energy identity balances within 3 SE on two benchmarks") {
  struct Case {
    Model model;
    Vector g;
    SourceTerm source;
  };
  const std::vector<Case> cases = {
      {two_state_model(), vec2(1.0, 0.0),
       [](double, State) { return 1.0; }},
      {three_state_model(), vec3(0.5, -0.2, 1.0),
       [](double, State x) { return 0.5 + 0.3 * x; }},
  };
  int id = 0;
  for (const auto& c : cases) {
    const int n = c.model.n_states();
    const int cells = c.model.n_cells();
    std::vector<Vector> a;
    for (int k = 0; k < cells; ++k) {
      Vector ak(n);
      for (State x = 0; x < n; ++x) ak(x) = c.source(0.0, x);
      a.push_back(ak);
    }
    const Driver linear =
        Driver::affine(c.model, a, std::vector<Vector>(cells, Vector::Zero(n)),
                       std::vector<Matrix>(cells, Matrix::Zero(n, n)));
    const ValueFunction v = solve_kolmogorov(c.model, linear, c.g, 1e-3);
    for (double beta : {0.0, 2.0}) {
      const EnergyGap e = energy_identity_gap(c.model, v, c.source, 0.0, 0,
                                              beta, 20000,
                                              RngStream(41 + id, 5));
      CHECK(std::abs(e.gap) <= 3.0 * e.se + 1e-4);
    }
    ++id;
  }
}

TEST_CASE("the identified Z field is a martingale integrand") {
  const Model m = gentle_model();
  const ValueFunction v = solve_kolmogorov(
      m, gentle_affine_driver(m), gentle_terminal(), 1e-3);
  const PredictableIntegrand z = [&v](double s, State y, State pre) {
    return v.value(s, y) - v.value(s, pre);
  };
  const MeanSE r = martingale_mean(m, z, 0.0, 0, 20000, RngStream(47),
                                   Quadrature::subgrid(v.step()));
  CHECK(std::abs(r.mean) <= 3.0 * r.se);
}

TEST_CASE("a priori stability: doubling the data perturbation at most "
          "quadruples the quadratic gap") {
  const Model m = gentle_model();
  const Vector g = gentle_terminal();
  const Driver base = gentle_affine_driver(m);
  const ValueFunction v0 = solve_kolmogorov(m, base, g, 1e-3);

  const auto perturbed_solution = [&](double delta) {
    const Driver d = Driver::affine(
        m, {vec2(0.2 + delta, -0.1 - delta)}, {vec2(0.25, 0.25)},
        {mat2(0.0, 0.1, 0.15, 0.0)});
    return solve_kolmogorov(m, d, vec2(g(0) + delta, g(1) - delta), 1e-3);
  };

  const auto quadratic_gap = [&](const ValueFunction& va,
                                 const ValueFunction& vb) {
    RngStream root(53);
    RunningStat stat;
    for (int i = 0; i < 4000; ++i) {
      RngStream rng = root.child(i);
      const MarkedPath path = simulate_path(m, 0.0, 0, rng);
      const double y_term = path_time_integral(
          m, path, 0.0, m.horizon(), va.step(), [&](double s, State x, int) {
            const double d = va.value(s, x) - vb.value(s, x);
            return d * d;
          });
      const double z_term = path_time_integral(
          m, path, 0.0, m.horizon(), va.step(),
          [&](double s, State x, int cell) {
            const Matrix& nu = m.nu_cell(cell);
            double acc = 0.0;
            for (Index y = 0; y < nu.cols(); ++y) {
              if (nu(x, y) == 0.0) continue;
              const double dz = (va.value(s, y) - va.value(s, x)) -
                                (vb.value(s, y) - vb.value(s, x));
              acc += dz * dz * nu(x, y);
            }
            return acc;
          });
      stat.add(y_term + z_term);
    }
    return MeanSE{stat.mean(), stat.se()};
  };

  const MeanSE small = quadratic_gap(v0, perturbed_solution(0.1));
  const MeanSE large = quadratic_gap(v0, perturbed_solution(0.2));
  CHECK(std::isfinite(small.mean));
  CHECK(large.mean <=
        4.0 * small.mean + 3.0 * std::sqrt(large.se * large.se +
                                           16.0 * small.se * small.se));
}
