#pragma once

#include "qbsc/hashing.hpp"
#include "qbsc/lockcom.hpp"

namespace qbsc {

// gamma = 4(log2 5 - 1) and c = 5 log2 5 - 4, the constants behind the
// a + b + c >= n mechanics.
inline const double kDefaultGamma = 4.0 * (std::log2(5.0) - 1.0);
inline const double kImpossibilityConstant = 5.0 * std::log2(5.0) - 4.0;

struct AliceAttackReport {
    int n = 0;
    int m_requested = 0;      // ceil(b_claimed + gamma)
    int m = 0;                // m actually used (clamped to n)
    double b_claimed = 0.0;
    double gamma = 0.0;
    HashFunction g;
    std::uint32_t y0 = 0;
    double epsilon = 0.0;     // (1/2) 2^{-(m-b)/2}
    Eigen::VectorXd per_y_success;        // measured reveal success per target y
    Eigen::VectorXd per_y_delta;          // delta(sigma^g_{y0}, sigma^g_y)
    Eigen::VectorXd per_y_lemma3_bound;   // 1 - sqrt(2 delta)
    Eigen::VectorXd per_y_overlap;        // achieved purification overlap vs y0
    Eigen::VectorXd per_string_success;   // within the run targeting g(x)
    double total_success = 0.0;           // sum_y q~^g_y
    double analytic_lower_bound = 0.0;       // 2^{n-m} (1 - 2 (2 eps)^{1/2})
    double implied_a = 0.0;               // log2(total_success)
    bool vacuous = false;                 // bound carries no content at this n
};

// Purified commitment to the superposition over g^{-1}(y): Alice keeps a copy
// of x and the basis-choice register, Bob holds Y. Register order (X, R, Y).
inline StateVector attack_superposition_state(const ProtocolInstance& inst, const HashFunction& g, std::uint32_t y) {
    Eigen::Index d = inst.dim(), k = inst.basis_count();
    auto pre = g.preimage(y);
    Vec amps = Vec::Zero(d * k * d);
    double norm = 1.0 / std::sqrt(double(pre.size()) * double(k));
    for (std::uint32_t x : pre)
        for (Eigen::Index r = 0; r < k; ++r) {
            const Mat& u = inst.unitaries.unitaries[r];
            for (Eigen::Index j = 0; j < d; ++j) amps((Eigen::Index(x) * k + r) * d + j) += norm * u(j, x);
        }
    return StateVector(std::move(amps), {d, k, d});
}

// Exact reveal simulation: Alice measures her X copy and R register, announces
// the outcome, Bob runs the honest check. Returns the success probability of
// revealing some x in g^{-1}(y), and per-x contributions.
inline double simulate_reveal(const ProtocolInstance& inst, const HashFunction& g, std::uint32_t y,
                              const StateVector& state, Eigen::VectorXd* per_x = nullptr) {
    Eigen::Index d = inst.dim(), k = inst.basis_count();
    double total = 0.0;
    for (std::uint32_t x : g.preimage(y)) {
        double px = 0.0;
        for (Eigen::Index r = 0; r < k; ++r) {
            const Mat& u = inst.unitaries.unitaries[r];
            Complex a = 0.0;
            for (Eigen::Index j = 0; j < d; ++j) a += std::conj(u(j, x)) * state.amps((Eigen::Index(x) * k + r) * d + j);
            px += std::norm(a);
        }
        if (per_x) (*per_x)(x) = px;
        total += px;
    }
    return total;
}

namespace detail {

// View of a (X, R, Y) pure state as a matrix over (Alice = X ox R, Bob = Y).
inline Mat attack_state_matrix(const StateVector& s, Eigen::Index d_local, Eigen::Index d_rest) {
    Eigen::Map<const Mat> m(s.amps.data(), d_rest, d_local);
    return m.transpose();
}

struct MovedState {
    Mat matrix;      // (U ox 1) applied to the source, as a (local, rest) matrix
    double overlap;  // |<target| (U ox 1) |source>|, equals F of the Y reductions
};

// Uhlmann rotation restricted to the joint local support of the two states.
// The unitary is only ever applied to the source, so the completion on the
// orthogonal complement never enters.
inline MovedState uhlmann_move(const Mat& target, const Mat& source) {
    Eigen::Index d_local = source.rows(), d_rest = source.cols();
    Mat both(d_local, 2 * d_rest);
    both << source, target;
    Eigen::HouseholderQR<Mat> qr(both);
    Eigen::Index r = std::min(d_local, 2 * d_rest);
    Mat q = qr.householderQ() * Mat::Identity(d_local, r);
    Mat c_src = q.adjoint() * source, c_tgt = q.adjoint() * target;
    Mat g = c_src * c_tgt.adjoint();
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat u = svd.matrixV() * svd.matrixU().adjoint();
    return {q * (u * c_src), std::min(svd.singularValues().sum(), 1.0)};
}

}  // namespace detail

// The full hashing attack. Requires d = 2^n. When ceil(b + gamma) exceeds n
// the truncation is clamped to n and the report is flagged vacuous instead of
// refusing to run; at desk scale n < c the bound carries no content anyway.
inline AliceAttackReport alice_attack(const ProtocolInstance& inst, double b_claimed, double gamma = kDefaultGamma) {
    int n = inst.n;
    if (inst.dim() != (Eigen::Index(1) << n)) throw std::invalid_argument("hashing attack requires d = 2^n");

    AliceAttackReport rep;
    rep.n = n;
    rep.b_claimed = b_claimed;
    rep.gamma = gamma;
    rep.m_requested = int(std::ceil(b_claimed + gamma));
    rep.m = std::min(rep.m_requested, n);
    if (rep.m < 0) throw std::invalid_argument("negative truncation");
    rep.epsilon = 0.5 * std::pow(2.0, -0.5 * (double(rep.m) - b_claimed));

    Ensemble ens = honest_ensemble(inst);
    int s = n - rep.m;
    HashFamily family = HashFamily::make(n, s);
    BestHash bh = best_hash(ens, family);
    rep.g = bh.g;

    Ensemble hashed = hashed_ensemble(ens, rep.g);
    Mat sigma = ens.average();
    Eigen::Index ny = hashed.size();
    Eigen::VectorXd dist_to_avg(ny);
    for (Eigen::Index y = 0; y < ny; ++y) dist_to_avg(y) = trace_distance(sigma, hashed.states[y]);
    Eigen::Index y0;
    dist_to_avg.minCoeff(&y0);
    rep.y0 = std::uint32_t(y0);

    StateVector psi_y0 = attack_superposition_state(inst, rep.g, rep.y0);
    rep.per_y_success.resize(ny);
    rep.per_y_delta.resize(ny);
    rep.per_y_lemma3_bound.resize(ny);
    rep.per_y_overlap = Eigen::VectorXd::Ones(ny);
    rep.per_string_success = Eigen::VectorXd::Zero(ens.size());

    for (Eigen::Index y = 0; y < ny; ++y) {
        rep.per_y_delta(y) = trace_distance(hashed.states[y0], hashed.states[y]);
        rep.per_y_lemma3_bound(y) = 1.0 - std::sqrt(2.0 * rep.per_y_delta(y));
        StateVector moved = psi_y0;
        if (y != y0) {
            Eigen::Index d_local = inst.dim() * inst.basis_count(), d_rest = inst.dim();
            StateVector psi_y = attack_superposition_state(inst, rep.g, std::uint32_t(y));
            detail::MovedState ms =
                detail::uhlmann_move(detail::attack_state_matrix(psi_y, d_local, d_rest),
                                     detail::attack_state_matrix(psi_y0, d_local, d_rest));
            Eigen::Map<Mat>(moved.amps.data(), d_rest, d_local) = ms.matrix.transpose();
            rep.per_y_overlap(y) = ms.overlap;
        }
        rep.per_y_success(y) = simulate_reveal(inst, rep.g, std::uint32_t(y), moved, &rep.per_string_success);
    }

    rep.total_success = rep.per_y_success.sum();
    rep.implied_a = std::log2(std::max(rep.total_success, 1e-300));
    double labels = std::pow(2.0, double(n - rep.m));
    rep.analytic_lower_bound = labels * (1.0 - 2.0 * std::sqrt(2.0 * rep.epsilon));
    rep.vacuous = (rep.m_requested > n) || (rep.analytic_lower_bound <= 0.0);
    return rep;
}

}  // namespace qbsc
