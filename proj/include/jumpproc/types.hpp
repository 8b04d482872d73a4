#pragma once

#include <Eigen/Dense>

namespace jumpproc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// State index into the finite state space {0, ..., n-1}.
using State = int;

/// Action index into the finite action set {0, ..., m-1}.
using Action = int;

}  // namespace jumpproc
