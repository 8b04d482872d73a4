#include "jumpproc/driver.hpp"

#include <cmath>

#include "jumpproc/errors.hpp"

namespace jumpproc {

Driver Driver::zero() {
  Driver d;
  d.kind_ = DriverKind::Zero;
  return d;
}

Driver Driver::affine(const Model& model, std::vector<Vector> a,
                      std::vector<Vector> b, std::vector<Matrix> c) {
  const auto cells = static_cast<std::size_t>(model.n_cells());
  const int n = model.n_states();
  if (a.size() != cells || b.size() != cells || c.size() != cells)
    throw ValidationError("affine driver: need one table per time cell");
  for (std::size_t k = 0; k < cells; ++k) {
    if (a[k].size() != n || b[k].size() != n || c[k].rows() != n ||
        c[k].cols() != n)
      throw ValidationError("affine driver: table dimensions do not match n");
    if (!a[k].allFinite() || !b[k].allFinite() || !c[k].allFinite())
      throw ValidationError("affine driver: tables must be finite");
  }

  Driver d;
  d.kind_ = DriverKind::Affine;
  d.a_ = std::move(a);
  d.b_ = std::move(b);
  d.c_ = std::move(c);

  // L' bounds the y-slope; L bounds the z-functional in L^2(nu) via the
  // Riesz norm sqrt(sum c^2 / nu) over transitions the measure charges.
  double lz = 0.0, ly = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    ly = std::max(ly, d.b_[k].cwiseAbs().maxCoeff());
    const Matrix& nu = model.nu_cell(static_cast<int>(k));
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int y = 0; y < n; ++y) {
        const double w = nu(x, y);
        if (w > 0.0) s += d.c_[k](x, y) * d.c_[k](x, y) / w;
      }
      lz = std::max(lz, std::sqrt(s));
    }
  }
  d.lipschitz_z_ = lz;
  d.lipschitz_y_ = ly;
  return d;
}

Driver Driver::hamiltonian(const Model& model,
                           std::shared_ptr<const ControlModel> control) {
  if (!control) throw ValidationError("hamiltonian driver: missing control");
  Driver d;
  d.kind_ = DriverKind::Hamiltonian;
  d.control_ = std::move(control);
  const auto [L, Lp] = lipschitz_bounds(model, *d.control_);
  d.lipschitz_z_ = L;
  d.lipschitz_y_ = Lp;
  return d;
}

Driver Driver::custom(Fn f, double lipschitz_z, double lipschitz_y) {
  return custom_cell_aware(
      [fn = std::move(f)](const Model&, int, double s, State x, double y,
                          const Vector& z) { return fn(s, x, y, z); },
      lipschitz_z, lipschitz_y);
}

Driver Driver::custom_cell_aware(CellFn f, double lipschitz_z,
                                 double lipschitz_y) {
  if (!(lipschitz_z >= 0.0) || !(lipschitz_y >= 0.0) ||
      !std::isfinite(lipschitz_z) || !std::isfinite(lipschitz_y))
    throw ValidationError(
        "custom driver: Lipschitz constants must be finite and nonnegative");
  Driver d;
  d.kind_ = DriverKind::Custom;
  d.cell_fn_ = std::move(f);
  d.lipschitz_z_ = lipschitz_z;
  d.lipschitz_y_ = lipschitz_y;
  return d;
}

double Driver::eval(const Model& model, int cell, double s, State x, double y,
                    const Vector& z) const {
  switch (kind_) {
    case DriverKind::Zero:
      return 0.0;
    case DriverKind::Affine:
      return a_[cell](x) + b_[cell](x) * y + c_[cell].row(x).dot(z);
    case DriverKind::Hamiltonian:
      return hamiltonian_in_cell(model, *control_, cell, x, z).value;
    case DriverKind::Custom:
      return cell_fn_(model, cell, s, x, y, z);
  }
  return 0.0;
}

double Driver::eval_at(const Model& model, double s, State x, double y,
                       const Vector& z) const {
  return eval(model, model.cell_index(s), s, x, y, z);
}

}  // namespace jumpproc
