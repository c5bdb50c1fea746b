#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "qbsc/rng.hpp"

namespace qbsc {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kNegEigTol = 1e-9;
inline constexpr double kSupportCut = 1e-12;

struct HermEig {
    Eigen::VectorXd values;  // ascending
    Mat vectors;
};

inline HermEig herm_eig(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// Eigenvalues of a density matrix, clamped per the support convention:
// values in [-1e-12, 0) become 0; anything below -1e-9 is an error.
inline Eigen::VectorXd clamped_spectrum(const Mat& rho) {
    HermEig e = herm_eig(rho);
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        double v = e.values(i);
        if (v < -kNegEigTol) throw std::domain_error("matrix has a significantly negative eigenvalue");
        if (v < kSupportCut) e.values(i) = 0.0;
    }
    return e.values;
}

// f applied to the clamped spectrum.
template <typename F>
Mat herm_apply(const Mat& a, F f) {
    HermEig e = herm_eig(a);
    Eigen::VectorXd d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        double v = e.values(i);
        if (v < -kNegEigTol) throw std::domain_error("matrix has a significantly negative eigenvalue");
        if (v < kSupportCut) v = 0.0;
        d(i) = f(v);
    }
    return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

inline Mat matrix_sqrt(const Mat& a) {
    return herm_apply(a, [](double v) { return std::sqrt(v); });
}

// Pseudo-inverse square root on the support: eigenvalues below 1e-12 map to 0.
inline Mat inv_sqrt_on_support(const Mat& a) {
    return herm_apply(a, [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
}

inline double trace_norm(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues().sum();
}

inline bool is_hermitian(const Mat& a, double tol = kHermTol) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Mat& u, double tol = 1e-9) {
    if (u.rows() != u.cols()) return false;
    Mat d = u.adjoint() * u - Mat::Identity(u.cols(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

inline bool is_isometry(const Mat& v, double tol = 1e-9) {
    Mat d = v.adjoint() * v - Mat::Identity(v.cols(), v.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

inline Mat random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

// Haar-distributed unitary via QR of a complex Gaussian matrix with
// phase-corrected diagonal.
inline Mat haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
    if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
    Mat g = random_gaussian_matrix(d, d, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        Complex rii = r(i, i);
        double a = std::abs(rii);
        q.col(i) *= (a > 0 ? rii / a : Complex(1, 0));
    }
    return q;
}

inline Mat haar_unitary(Eigen::Index d, std::uint64_t seed) {
    auto rng = make_rng(seed, "haar-unitary");
    return haar_unitary(d, rng);
}

// Haar-random isometry: d_in orthonormal columns in dimension d_out >= d_in.
inline Mat haar_isometry(Eigen::Index d_out, Eigen::Index d_in, std::mt19937_64& rng) {
    if (d_out < d_in) throw std::invalid_argument("haar_isometry: d_out < d_in");
    return haar_unitary(d_out, rng).leftCols(d_in);
}

inline Vec random_pure_state(Eigen::Index d, std::mt19937_64& rng) {
    Vec v = random_gaussian_matrix(d, 1, rng).col(0);
    return v / v.norm();
}

// Random full-rank density matrix (Hilbert-Schmidt-ish: G G^dag normalized).
inline Mat random_density_matrix(Eigen::Index d, std::mt19937_64& rng) {
    Mat g = random_gaussian_matrix(d, d, rng);
    Mat rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline double log2_safe(double x) { return x > 0.0 ? std::log2(x) : 0.0; }

// Von Neumann entropy in bits, 0*log0 = 0.
inline double von_neumann_entropy(const Mat& rho) {
    Eigen::VectorXd ev = clamped_spectrum(rho);
    double h = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > 0.0) h -= ev(i) * std::log2(ev(i));
    return h;
}

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

}  // namespace qbsc
