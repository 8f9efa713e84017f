#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace causal_atlas {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<int, Eigen::Dynamic, 1>;

}  // namespace causal_atlas
