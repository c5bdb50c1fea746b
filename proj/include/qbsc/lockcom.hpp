#pragma once

#include "qbsc/ensemble.hpp"
#include "qbsc/unitaries.hpp"

namespace qbsc {

// LOCKCOM(n, U): commit by sending U_r |x> for a random basis index r.
struct ProtocolInstance {
    int n = 0;  // string length; for non-power dimensions, log2(d) of the Fourier variant
    UnitarySet unitaries;
    std::string label;

    ProtocolInstance() = default;
    ProtocolInstance(int n_, UnitarySet us, std::string l = {}) : n(n_), unitaries(std::move(us)), label(std::move(l)) {}

    Eigen::Index dim() const { return unitaries.dim(); }
    Eigen::Index basis_count() const { return unitaries.size(); }
};

enum class Verdict { Accept, Reject };

struct Transcript {
    Eigen::Index committed_x = -1;
    Eigen::Index r = -1;
    DensityMatrix committed_state;  // Bob's view
    bool revealed = false;
    Eigen::Index revealed_x = -1;
    Eigen::Index revealed_r = -1;
    Verdict verdict = Verdict::Reject;
};

inline Transcript lockcom_commit(const ProtocolInstance& inst, Eigen::Index x, Eigen::Index r) {
    if (x < 0 || x >= inst.dim()) throw std::out_of_range("x outside {0,1}^n");
    if (r < 0 || r >= inst.basis_count()) throw std::out_of_range("basis index out of range");
    Transcript t;
    t.committed_x = x;
    t.r = r;
    Vec v = inst.unitaries.unitaries[r].col(x);
    t.committed_state = DensityMatrix(v * v.adjoint(), {inst.dim()});
    return t;
}

// Bob applies U_r^dag and measures in the computational basis; acceptance
// probability is <x| U_r^dag sigma U_r |x>.
inline double lockcom_accept_probability(const ProtocolInstance& inst, const DensityMatrix& bob_state, Eigen::Index x,
                                         Eigen::Index r) {
    const Mat& u = inst.unitaries.unitaries[r];
    Vec col = u.col(x);
    return std::real(col.dot(bob_state.mat * col));  // <x|U^dag rho U|x>
}

// With an RNG the verdict is sampled from the exact acceptance probability;
// without one it is deterministic (accept iff the probability is 1).
inline Verdict lockcom_reveal(const ProtocolInstance& inst, Transcript& t, Eigen::Index x, Eigen::Index r,
                              std::mt19937_64* rng = nullptr) {
    if (t.committed_x < 0) throw std::logic_error("reveal before commit");
    if (x < 0 || x >= inst.dim() || r < 0 || r >= inst.basis_count()) throw std::out_of_range("bad reveal values");
    double p = lockcom_accept_probability(inst, t.committed_state, x, r);
    t.revealed = true;
    t.revealed_x = x;
    t.revealed_r = r;
    if (rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        t.verdict = (u(*rng) < p) ? Verdict::Accept : Verdict::Reject;
    } else {
        t.verdict = (p >= 1.0 - 1e-9) ? Verdict::Accept : Verdict::Reject;
    }
    return t.verdict;
}

// Bob's view of an honest run: rho_x = (1/|U|) sum_r U_r |x><x| U_r^dag,
// uniform priors.
inline Ensemble honest_ensemble(const ProtocolInstance& inst) {
    std::vector<Mat> states;
    Eigen::Index d = inst.dim(), k = inst.basis_count();
    for (Eigen::Index x = 0; x < d; ++x) {
        Mat rho = Mat::Zero(d, d);
        for (Eigen::Index r = 0; r < k; ++r) {
            Vec v = inst.unitaries.unitaries[r].col(x);
            rho += v * v.adjoint();
        }
        states.push_back(rho / double(k));
    }
    return Ensemble::uniform(std::move(states));
}

struct BindingAudit {
    double upper_bound;    // sum_{x,r} Tr(|x><x| U_r^dag rho U_r) = |U| exactly
    double achieved;       // sum_x p^A_x for the declared reveal strategy
    std::vector<Eigen::Index> strategy;  // announced r per x
};

// Lemma-style audit: the double sum collapses to |U| for any state Alice
// leaves with Bob. `strategy` maps each x to the r Alice would announce;
// best-r-per-x is chosen when absent.
inline BindingAudit binding_audit(const ProtocolInstance& inst, const DensityMatrix& rho_bob,
                                  const std::vector<Eigen::Index>* strategy = nullptr) {
    if (rho_bob.dim() != inst.dim()) throw std::invalid_argument("dimension mismatch");
    BindingAudit audit{0.0, 0.0, {}};
    for (Eigen::Index x = 0; x < inst.dim(); ++x) {
        double best = -1.0;
        Eigen::Index best_r = 0;
        for (Eigen::Index r = 0; r < inst.basis_count(); ++r) {
            double p = lockcom_accept_probability(inst, rho_bob, x, r);
            audit.upper_bound += p;
            if (p > best) {
                best = p;
                best_r = r;
            }
        }
        Eigen::Index chosen = strategy ? (*strategy)[x] : best_r;
        audit.achieved += lockcom_accept_probability(inst, rho_bob, x, chosen);
        audit.strategy.push_back(chosen);
    }
    return audit;
}

}  // namespace qbsc
