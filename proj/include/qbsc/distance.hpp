#pragma once

#include "qbsc/state.hpp"

namespace qbsc {

inline double trace_distance(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw std::invalid_argument("dimension mismatch");
    return 0.5 * trace_norm(rho - sigma);
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return trace_distance(rho.mat, sigma.mat);
}

// Tr sqrt(sqrt(rho) sigma sqrt(rho)); reduces to |<psi|phi>| on pure inputs.
inline double fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows()) throw std::invalid_argument("dimension mismatch");
    Mat sr = matrix_sqrt(rho);
    double f = trace_norm(sr * matrix_sqrt(sigma));
    return std::min(f, 1.0);
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return fidelity(rho.mat, sigma.mat);
}

struct UhlmannResult {
    Mat unitary;     // acts on the local registers
    double overlap;  // |<phi0| (U ox 1) |phi1>| achieved
};

// Local unitary on `local` maximizing |<phi0| (U ox 1) |phi1>|. With the
// states decomposed as M_i over (local, rest), the overlap is Tr(U M1 M0^dag);
// the maximizer comes from the SVD of the cross-Gram matrix M1 M0^dag and the
// achieved value is its trace norm, which is the fidelity of the reductions on
// the rest registers (Uhlmann).
inline UhlmannResult uhlmann_unitary(const StateVector& phi0, const StateVector& phi1, const std::vector<int>& local) {
    if (phi0.dims != phi1.dims) throw std::invalid_argument("register mismatch");
    detail::check_registers(phi0.dims, local);

    std::vector<int> perm = local;
    std::vector<char> used(phi0.dims.size(), 0);
    for (int r : local) used[r] = 1;
    for (int i = 0; i < int(phi0.dims.size()); ++i)
        if (!used[i]) perm.push_back(i);
    StateVector f0 = permute_registers(phi0, perm);
    StateVector f1 = permute_registers(phi1, perm);

    Eigen::Index d_local = 1;
    for (int r : local) d_local *= phi0.dims[r];
    Eigen::Index d_rest = phi0.dim() / d_local;

    // amps(a, b) with a the local index: column-major map is (b, a).
    Eigen::Map<const Mat> m0t(f0.amps.data(), d_rest, d_local);
    Eigen::Map<const Mat> m1t(f1.amps.data(), d_rest, d_local);
    Mat m0 = m0t.transpose(), m1 = m1t.transpose();

    Mat g = m1 * m0.adjoint();
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Tr(U W S V^dag) maximized by U = V W^dag, value = sum of singular values.
    Mat u = svd.matrixV() * svd.matrixU().adjoint();
    double overlap = svd.singularValues().sum();
    return {std::move(u), std::min(overlap, 1.0)};
}

}  // namespace qbsc
