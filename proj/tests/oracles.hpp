// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include "qbsc/ensemble.hpp"
#include "qbsc/lockcom.hpp"
#include "qbsc/metrics.hpp"

namespace qbsc::oracle {

// H_2 straight from the definition on the full joint matrix.
inline double collision_entropy_direct(const Ensemble& ens) {
    Mat joint = ens.joint();
    Mat rinv = inv_sqrt_on_support(ens.average());
    Mat big = kron(Mat::Identity(ens.size(), ens.size()), rinv) * joint;
    return -std::log2((big * big).trace().real());
}

// Helstrom optimum for two pure states with equal priors.
inline double helstrom_two_pure(const Vec& a, const Vec& b) {
    double ov = std::abs(a.dot(b));
    return 0.5 * (1.0 + std::sqrt(1.0 - ov * ov));
}

// Brute-force grid over real projective qubit measurements.
inline double qubit_projective_grid(const Ensemble& ens, int angles = 10000) {
    double best = 0.0;
    for (int i = 0; i < angles; ++i) {
        double t = M_PI * double(i) / double(angles);
        Vec v(2);
        v << std::cos(t), std::sin(t);
        Mat p = v * v.adjoint();
        std::vector<Mat> povm{p, Mat::Identity(2, 2) - p};
        best = std::max(best, measurement_mutual_information(ens, povm));
    }
    return best;
}

inline Ensemble two_bases_lockcom_ensemble(int n) {
    return honest_ensemble(ProtocolInstance(n, identity_hadamard_set(n)));
}

inline Ensemble random_ensemble(Eigen::Index n_states, Eigen::Index d, std::mt19937_64& rng, bool pure = false) {
    Eigen::VectorXd p(n_states);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (Eigen::Index i = 0; i < n_states; ++i) p(i) = u(rng);
    p /= p.sum();
    std::vector<Mat> states;
    for (Eigen::Index i = 0; i < n_states; ++i) {
        if (pure) {
            Vec v = random_pure_state(d, rng);
            states.push_back(v * v.adjoint());
        } else {
            states.push_back(random_density_matrix(d, rng));
        }
    }
    return Ensemble(std::move(p), std::move(states));
}

}  // namespace qbsc::oracle
