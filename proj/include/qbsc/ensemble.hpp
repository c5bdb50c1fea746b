#pragma once

#include "qbsc/channel.hpp"
#include "qbsc/distance.hpp"

namespace qbsc {

// {p_x, rho_x} with the derived average state and classical-quantum joint.
struct Ensemble {
    Eigen::VectorXd priors;
    std::vector<Mat> states;  // common dimension d

    Ensemble() = default;
    Ensemble(Eigen::VectorXd p, std::vector<Mat> s) : priors(std::move(p)), states(std::move(s)) {
        if (priors.size() != Eigen::Index(states.size())) throw std::invalid_argument("priors/states length mismatch");
        if (states.empty()) throw std::invalid_argument("empty ensemble");
        if (priors.minCoeff() < 0.0) throw std::invalid_argument("negative prior");
        if (std::abs(priors.sum() - 1.0) > kHermTol) throw std::invalid_argument("priors do not sum to 1");
        for (const Mat& r : states)
            if (r.rows() != dim() || r.cols() != dim()) throw std::invalid_argument("states have mixed dimensions");
        if (std::abs(average().trace().real() - 1.0) > kNegEigTol) throw std::invalid_argument("average state trace != 1");
    }

    Eigen::Index size() const { return priors.size(); }
    Eigen::Index dim() const { return states.front().rows(); }

    Mat average() const {
        Mat rho = Mat::Zero(dim(), dim());
        for (Eigen::Index x = 0; x < size(); ++x) rho += priors(x) * states[x];
        return rho;
    }

    // rho_AB = sum_x p_x |x><x| ox rho_x (block diagonal).
    Mat joint() const {
        Eigen::Index d = dim();
        Mat j = Mat::Zero(size() * d, size() * d);
        for (Eigen::Index x = 0; x < size(); ++x) j.block(x * d, x * d, d, d) = priors(x) * states[x];
        return j;
    }

    // n for ensembles over bit strings; throws if the size is not a power of two.
    int n_bits() const {
        Eigen::Index N = size();
        if (N < 1 || (N & (N - 1)) != 0) throw std::invalid_argument("ensemble size is not a power of two");
        int n = 0;
        while ((Eigen::Index(1) << n) < N) ++n;
        return n;
    }

    static Ensemble uniform(std::vector<Mat> states) {
        Eigen::Index N = Eigen::Index(states.size());
        return Ensemble(Eigen::VectorXd::Constant(N, 1.0 / double(N)), std::move(states));
    }

    // Uniform ensemble of computational basis states.
    static Ensemble orthogonal(Eigen::Index d) {
        std::vector<Mat> s;
        for (Eigen::Index i = 0; i < d; ++i) s.push_back(basis_state(d, i).density());
        return uniform(std::move(s));
    }
};

inline Ensemble apply_channel(const QuantumChannel& ch, const Ensemble& ens) {
    std::vector<Mat> out;
    out.reserve(ens.size());
    for (const Mat& r : ens.states) {
        Mat m = ch.apply(r);
        out.push_back((m + Mat(m.adjoint())) / 2.0);
    }
    return Ensemble(ens.priors, std::move(out));
}

inline Ensemble tensor_power(const Ensemble& ens, int m) {
    Ensemble out = ens;
    for (int i = 1; i < m; ++i) {
        Eigen::Index N = out.size() * ens.size();
        Eigen::VectorXd p(N);
        std::vector<Mat> s;
        s.reserve(N);
        for (Eigen::Index a = 0; a < out.size(); ++a)
            for (Eigen::Index b = 0; b < ens.size(); ++b) {
                p(a * ens.size() + b) = out.priors(a) * ens.priors(b);
                s.push_back(kron(out.states[a], ens.states[b]));
            }
        out = Ensemble(std::move(p), std::move(s));
    }
    return out;
}

}  // namespace qbsc
