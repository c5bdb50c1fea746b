#pragma once

#include <string>

#include "qbsc/state.hpp"

namespace qbsc {

struct UnitarySet {
    std::vector<Mat> unitaries;
    std::string label;

    UnitarySet() = default;
    UnitarySet(std::vector<Mat> us, std::string l) : unitaries(std::move(us)), label(std::move(l)) {
        if (unitaries.empty()) throw std::invalid_argument("empty unitary set");
        for (const Mat& u : unitaries) {
            if (u.rows() != dim()) throw std::invalid_argument("unitaries have mixed dimensions");
            if (!is_unitary(u)) throw std::invalid_argument("matrix fails the unitarity check");
        }
    }

    Eigen::Index dim() const { return unitaries.front().rows(); }
    Eigen::Index size() const { return Eigen::Index(unitaries.size()); }
};

inline Mat hadamard() {
    Mat h(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

inline Mat hadamard_n(int n) {
    Mat h = Mat::Identity(1, 1);
    for (int i = 0; i < n; ++i) h = kron(h, hadamard());
    return h;
}

inline Mat fourier_matrix(Eigen::Index d) {
    Mat f(d, d);
    const double twopi = 2.0 * M_PI;
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) f(j, k) = std::polar(1.0 / std::sqrt(double(d)), twopi * double(j * k) / double(d));
    return f;
}

// identity-hadamard: {1^{ox n}, H^{ox n}} on 2^n.
inline UnitarySet identity_hadamard_set(int n) {
    Eigen::Index d = Eigen::Index(1) << n;
    return UnitarySet({Mat::Identity(d, d), hadamard_n(n)}, "identity-hadamard");
}

// fourier-pair: {1, F_d} on dimension d (any d, not only powers of two).
inline UnitarySet fourier_pair_set(Eigen::Index d) {
    return UnitarySet({Mat::Identity(d, d), fourier_matrix(d)}, "fourier-pair");
}

// haar(k): k seeded Haar samples on dimension d.
inline UnitarySet haar_set(Eigen::Index d, int k, std::uint64_t seed) {
    std::vector<Mat> us;
    us.reserve(k);
    for (int i = 0; i < k; ++i) {
        auto rng = make_rng(seed, "haar-set", std::uint64_t(i));
        us.push_back(haar_unitary(d, rng));
    }
    return UnitarySet(std::move(us), "haar-random");
}

enum class StandardKind { IdentityHadamard, FourierPair, Haar };

inline UnitarySet standard_unitaries(StandardKind kind, Eigen::Index n_or_d, int k = 0, std::uint64_t seed = 0) {
    switch (kind) {
        case StandardKind::IdentityHadamard:
            return identity_hadamard_set(int(n_or_d));
        case StandardKind::FourierPair:
            return fourier_pair_set(n_or_d);
        case StandardKind::Haar:
            return haar_set(n_or_d, k, seed);
    }
    throw std::invalid_argument("unknown unitary-set kind");
}

}  // namespace qbsc
