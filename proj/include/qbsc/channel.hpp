#pragma once

#include <optional>

#include "qbsc/state.hpp"

namespace qbsc {

// CPTP map in Kraus form, optionally carrying the Stinespring isometry it was
// built from (input dim -> output dim ox environment).
struct QuantumChannel {
    std::vector<Mat> kraus;
    std::optional<Mat> stinespring;
    Eigen::Index env_dim = 0;

    QuantumChannel() = default;
    explicit QuantumChannel(std::vector<Mat> ops) : kraus(std::move(ops)) {
        if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
        Mat sum = Mat::Zero(input_dim(), input_dim());
        for (const Mat& k : kraus) {
            if (k.cols() != input_dim() || k.rows() != output_dim()) throw std::invalid_argument("inconsistent Kraus shapes");
            sum += k.adjoint() * k;
        }
        if ((sum - Mat::Identity(input_dim(), input_dim())).cwiseAbs().maxCoeff() > 1e-9)
            throw std::invalid_argument("Kraus operators are not trace preserving");
    }

    Eigen::Index input_dim() const { return kraus.front().cols(); }
    Eigen::Index output_dim() const { return kraus.front().rows(); }

    Mat apply(const Mat& rho) const {
        Mat out = Mat::Zero(output_dim(), output_dim());
        for (const Mat& k : kraus) out += k * rho * k.adjoint();
        return out;
    }

    DensityMatrix apply(const DensityMatrix& rho) const {
        Mat out = apply(rho.mat);
        out = (out + Mat(out.adjoint())) / 2.0;
        return DensityMatrix(std::move(out), {output_dim()});
    }

    static QuantumChannel identity(Eigen::Index d) { return QuantumChannel({Mat::Identity(d, d)}); }

    static QuantumChannel depolarizing(Eigen::Index d, double p) {
        // (1-p) rho + p 1/d, written with d^2 generalized-Pauli-free Kraus ops:
        // sqrt(1-p) 1 plus sqrt(p/d) |i><j| for all i, j.
        std::vector<Mat> ops;
        ops.push_back(std::sqrt(1.0 - p) * Mat::Identity(d, d));
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                Mat k = Mat::Zero(d, d);
                k(i, j) = std::sqrt(p / double(d));
                ops.push_back(std::move(k));
            }
        return QuantumChannel(std::move(ops));
    }

    static QuantumChannel dephasing(double p) {
        Mat z(2, 2);
        z << 1, 0, 0, -1;
        std::vector<Mat> ops;
        ops.push_back(std::sqrt(1.0 - p / 2.0) * Mat::Identity(2, 2));
        ops.push_back(std::sqrt(p / 2.0) * z);
        return QuantumChannel(std::move(ops));
    }

    // Kraus operators from an isometry V: d_in -> d_out ox d_env,
    // K_e = (1 ox <e|) V.
    static QuantumChannel from_stinespring(const Mat& v, Eigen::Index d_out, Eigen::Index d_env) {
        if (v.rows() != d_out * d_env) throw std::invalid_argument("isometry shape mismatch");
        if (!is_isometry(v)) throw std::invalid_argument("not an isometry");
        std::vector<Mat> ops;
        for (Eigen::Index e = 0; e < d_env; ++e) {
            Mat k(d_out, v.cols());
            for (Eigen::Index i = 0; i < d_out; ++i) k.row(i) = v.row(i * d_env + e);
            ops.push_back(std::move(k));
        }
        QuantumChannel ch(std::move(ops));
        ch.stinespring = v;
        ch.env_dim = d_env;
        return ch;
    }

    static QuantumChannel random(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index kraus_rank, std::mt19937_64& rng) {
        Mat v = haar_isometry(d_out * kraus_rank, d_in, rng);
        return from_stinespring(v, d_out, kraus_rank);
    }
};

// (1 ox Lambda) acting on the second register of a bipartite matrix.
inline Mat apply_to_second(const QuantumChannel& ch, const Mat& rho, Eigen::Index d_first) {
    Eigen::Index din = ch.input_dim(), dout = ch.output_dim();
    Mat out = Mat::Zero(d_first * dout, d_first * dout);
    for (const Mat& k : ch.kraus) {
        Mat big = kron(Mat::Identity(d_first, d_first), k);
        out += big * rho * big.adjoint();
    }
    (void)din;
    return out;
}

}  // namespace qbsc
