#pragma once

// Shared desk-scale fixtures for the unit and acceptance suites.

#include <memory>
#include <vector>

#include "jumpproc/control_model.hpp"
#include "jumpproc/driver.hpp"
#include "jumpproc/model.hpp"

namespace testsupport {

using jumpproc::ControlModel;
using jumpproc::ControlModelData;
using jumpproc::Driver;
using jumpproc::Matrix;
using jumpproc::Model;
using jumpproc::ModelData;
using jumpproc::Vector;

inline Matrix mat2(double a00, double a01, double a10, double a11) {
  Matrix m(2, 2);
  m << a00, a01, a10, a11;
  return m;
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

inline Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

/// The 2-state constant-rate linear benchmark: nu = [[0,2],[3,0]], T = 1.
inline Model two_state_model() {
  ModelData d;
  d.n_states = 2;
  d.horizon = 1.0;
  d.breakpoints = {0.0, 1.0};
  d.nu = {mat2(0.0, 2.0, 3.0, 0.0)};
  return jumpproc::validate_model(d);
}

/// Terminal data of the linear benchmark.
inline Vector two_state_terminal() { return vec2(1.0, 0.0); }

/// A 2-state model with two rate cells (breakpoint mid-horizon).
inline Model two_cell_model() {
  ModelData d;
  d.n_states = 2;
  d.horizon = 2.0;
  d.breakpoints = {0.0, 1.0, 2.0};
  d.nu = {mat2(0.0, 1.0, 2.0, 0.0), mat2(0.0, 2.0, 1.0, 0.0)};
  return jumpproc::validate_model(d);
}

/// A 3-state model with two cells, used as the second compensator benchmark.
inline Model three_state_model() {
  ModelData d;
  d.n_states = 3;
  d.horizon = 1.0;
  d.breakpoints = {0.0, 0.5, 1.0};
  Matrix a(3, 3), b(3, 3);
  a << 0.0, 0.8, 0.4, 0.6, 0.0, 0.5, 0.3, 0.9, 0.0;
  b << 0.0, 0.5, 0.2, 1.0, 0.0, 0.3, 0.7, 0.4, 0.0;
  d.nu = {a, b};
  return jumpproc::validate_model(d);
}

/// The gentle nonlinear benchmark: small rates so the pathwise BSDE residual
/// stays below 1e-6 at h = 1e-3.
inline Model gentle_model() {
  ModelData d;
  d.n_states = 2;
  d.horizon = 1.0;
  d.breakpoints = {0.0, 1.0};
  d.nu = {mat2(0.0, 0.6, 0.5, 0.0)};
  return jumpproc::validate_model(d);
}

inline Driver gentle_affine_driver(const Model& model) {
  return Driver::affine(model, {vec2(0.2, -0.1)}, {vec2(0.25, 0.25)},
                        {mat2(0.0, 0.1, 0.15, 0.0)});
}

inline Vector gentle_terminal() { return vec2(1.0, 0.0); }

/// Admission-control benchmark: a 3-state queue with arrivals (rate 1.0) and
/// service (rate 1.2), 4 time cells over T = 2, and two actions: admit
/// (r = 1 everywhere) and throttle (arrival rate scaled by 0.2, running
/// surcharge 0.25). Holding cost is 1 per unit queue length; terminal cost
/// (0, 1, 2.5). The optimal law is time-invariant: throttle in states 0 and
/// 1, admit in state 2 (nothing arrives there).
inline Model admission_model() {
  ModelData d;
  d.n_states = 3;
  d.horizon = 2.0;
  d.breakpoints = {0.0, 0.5, 1.0, 1.5, 2.0};
  Matrix nu(3, 3);
  nu << 0.0, 1.0, 0.0, 1.2, 0.0, 1.0, 0.0, 1.2, 0.0;
  d.nu = {nu, nu, nu, nu};
  return jumpproc::validate_model(d);
}

inline ControlModel admission_control(const Model& model) {
  ControlModelData d;
  d.n_actions = 2;
  d.action_labels = {"admit", "throttle"};
  Matrix admit = Matrix::Ones(3, 3);
  Matrix throttle = Matrix::Ones(3, 3);
  throttle(0, 1) = 0.2;
  throttle(1, 2) = 0.2;
  Matrix l(3, 2);
  l << 0.0, 0.25, 1.0, 1.25, 2.0, 2.25;
  for (int k = 0; k < model.n_cells(); ++k) {
    d.r.push_back({admit, throttle});
    d.l.push_back(l);
  }
  d.g = vec3(0.0, 1.0, 2.5);
  return jumpproc::validate_control_model(model, d);
}

}  // namespace testsupport
