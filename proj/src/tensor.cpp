#include "hb/tensor.hpp"

#include "hb/types.hpp"

namespace hb::detail {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> tensor_mode_contract(const std::vector<double>& in, std::vector<int>& dims,
                                         int ax, const Eigen::MatrixXd& A) {
    const int nd = static_cast<int>(dims.size());
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < ax; ++i) outer *= dims[i];
    for (int i = ax + 1; i < nd; ++i) inner *= dims[i];
    const int mid = dims[ax];
    require(A.cols() == mid, "tensor_mode_contract: dimension mismatch");
    const int out_mid = static_cast<int>(A.rows());
    std::vector<double> out(outer * out_mid * inner);
    if (inner == 1) {
        Eigen::Map<const RowMat> m_in(in.data(), static_cast<Eigen::Index>(outer), mid);
        Eigen::Map<RowMat> m_out(out.data(), static_cast<Eigen::Index>(outer), out_mid);
        m_out.noalias() = m_in * A.transpose();
    } else {
        for (std::size_t o = 0; o < outer; ++o) {
            Eigen::Map<const RowMat> m_in(in.data() + o * mid * inner, mid,
                                          static_cast<Eigen::Index>(inner));
            Eigen::Map<RowMat> m_out(out.data() + o * out_mid * inner, out_mid,
                                     static_cast<Eigen::Index>(inner));
            m_out.noalias() = A * m_in;
        }
    }
    dims[ax] = out_mid;
    return out;
}

void cumsum_axis(std::vector<double>& v, const std::vector<int>& dims, int ax) {
    const int nd = static_cast<int>(dims.size());
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < ax; ++i) outer *= dims[i];
    for (int i = ax + 1; i < nd; ++i) inner *= dims[i];
    const int mid = dims[ax];
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) {
            double acc = 0.0;
            double* base = v.data() + o * mid * inner + i;
            for (int m = 0; m < mid; ++m) {
                acc += base[m * inner];
                base[m * inner] = acc;
            }
        }
}

std::vector<double> pad_zero_front(const std::vector<double>& in, std::vector<int>& dims, int ax) {
    const int nd = static_cast<int>(dims.size());
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < ax; ++i) outer *= dims[i];
    for (int i = ax + 1; i < nd; ++i) inner *= dims[i];
    const int mid = dims[ax];
    std::vector<double> out(outer * (mid + 1) * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        std::copy(in.begin() + static_cast<std::ptrdiff_t>(o * mid * inner),
                  in.begin() + static_cast<std::ptrdiff_t>((o + 1) * mid * inner),
                  out.begin() + static_cast<std::ptrdiff_t>(o * (mid + 1) * inner + inner));
    dims[ax] = mid + 1;
    return out;
}

} // namespace hb::detail
