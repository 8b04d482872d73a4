#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "jumpproc/control_model.hpp"
#include "jumpproc/model.hpp"
#include "jumpproc/types.hpp"

namespace jumpproc {

enum class DriverKind { Zero, Affine, Hamiltonian, Custom };

/// Generator f(s, x, y, z(.)) of the nonlinear Kolmogorov equation. The
/// z argument is the full vector y' -> v(s,y') - v(s,x), including the zero
/// at y' = x. Tabulated variants (Affine, Hamiltonian) look their
/// coefficients up per model time cell; solvers pin the cell explicitly so
/// stage times landing exactly on a breakpoint use the cell being integrated.
class Driver {
 public:
  /// f(s, x, y, z); time-based cell lookup with the half-open convention.
  using Fn = std::function<double(double s, State x, double y, const Vector& z)>;
  /// Cell-aware form used internally (and by truncate wrappers).
  using CellFn = std::function<double(const Model& model, int cell, double s,
                                      State x, double y, const Vector& z)>;

  /// f == 0.
  static Driver zero();

  /// f(s,x,y,z) = a(s,x) + b(s,x) y + sum_y' c(s,x,y') z(y') with per-cell
  /// tables; Lipschitz constants are derived from the tables and the model.
  static Driver affine(const Model& model, std::vector<Vector> a,
                       std::vector<Vector> b, std::vector<Matrix> c);

  /// The control hamiltonian; L = (C_r + 1) sqrt(Lambda), L' = 0.
  static Driver hamiltonian(const Model& model,
                            std::shared_ptr<const ControlModel> control);

  /// User callback with declared Lipschitz constants (L for z, L' for y).
  static Driver custom(Fn f, double lipschitz_z, double lipschitz_y);

  /// Cell-aware callback (keeps pinned-cell semantics through wrappers).
  static Driver custom_cell_aware(CellFn f, double lipschitz_z,
                                  double lipschitz_y);

  double eval(const Model& model, int cell, double s, State x, double y,
              const Vector& z) const;

  /// Cell resolved from s (requires s in [0, T)).
  double eval_at(const Model& model, double s, State x, double y,
                 const Vector& z) const;

  DriverKind kind() const { return kind_; }
  double lipschitz_z() const { return lipschitz_z_; }
  double lipschitz_y() const { return lipschitz_y_; }
  const ControlModel* control() const { return control_.get(); }

 private:
  Driver() = default;

  DriverKind kind_ = DriverKind::Zero;
  std::vector<Vector> a_, b_;
  std::vector<Matrix> c_;
  std::shared_ptr<const ControlModel> control_;
  CellFn cell_fn_;
  double lipschitz_z_ = 0.0;
  double lipschitz_y_ = 0.0;
};

}  // namespace jumpproc
