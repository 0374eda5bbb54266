#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hb::detail {

/// Contract axis `ax` of a row-major tensor with matrix A
/// (out dim = A.rows(), contracted dim = A.cols() = dims[ax]).
std::vector<double> tensor_mode_contract(const std::vector<double>& in, std::vector<int>& dims,
                                         int ax, const Eigen::MatrixXd& A);

/// In-place prefix sum along one axis of a row-major tensor.
void cumsum_axis(std::vector<double>& v, const std::vector<int>& dims, int ax);

/// Insert a zero hyperplane in front of axis `ax` (dims[ax] grows by one).
std::vector<double> pad_zero_front(const std::vector<double>& in, std::vector<int>& dims, int ax);

} // namespace hb::detail
