#pragma once

#include "qbsc/attack.hpp"
#include "qbsc/metrics.hpp"

namespace qbsc {

struct LockingReport {
    int n = 0;
    int k_bases = 0;
    std::uint64_t seed = 0;
    double binding_a = 0.0;  // log2 k
    double chi = 0.0;
    double iacc_lower = 0.0;  // see-saw estimate; a lower bound, no asymptotic claim
};

// Samples k Haar bases, builds the LOCKCOM ensemble and measures how much the
// random bases lock Bob's information.
inline LockingReport locking_experiment(int n, int k_bases, std::uint64_t seed, int restarts = 32, int iters = 500) {
    if (n < 1 || n > 3) throw std::invalid_argument("locking experiment limited to n <= 3");
    if (k_bases < 1 || k_bases > 64) throw std::invalid_argument("k limited to 64 bases");
    Eigen::Index d = Eigen::Index(1) << n;
    ProtocolInstance inst(n, haar_set(d, k_bases, seed), "haar-locking");
    Ensemble ens = honest_ensemble(inst);
    LockingReport rep;
    rep.n = n;
    rep.k_bases = k_bases;
    rep.seed = seed;
    rep.binding_a = std::log2(double(k_bases));
    rep.chi = holevo_chi(ens);
    rep.iacc_lower = accessible_info_estimate(ens, restarts, iters, derive_seed(seed, "locking-seesaw", 0)).lower_bound;
    return rep;
}

}  // namespace qbsc
