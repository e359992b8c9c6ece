#pragma once

#include <Eigen/Dense>

namespace gralp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

} // namespace gralp
