#pragma once

#include "qbsc/metrics.hpp"
#include "qbsc/state.hpp"

namespace qbsc {

// CS-Bob-LOCKCOM register model. Bob's cheating is a pair of isometries:
// V_cheat : Y -> C ox Q applied on receipt, V_prepare : R' Q -> R' S T applied
// after the reveal information arrives. C holds the information gathered while
// cheating and is never touched again.
struct CheatScenario {
    Eigen::Index d = 2;
    Mat basis_unitary;  // U with U^0 = 1, U^1 = U
    Mat v_cheat;        // (dC*dQ) x d
    Eigen::Index dC = 1, dQ = 2;
    Mat v_prepare;      // (2*dS*dT) x (2*dQ)
    Eigen::Index dS = 2, dT = 1;
    std::string kind;

    void validate() const {
        if (!is_unitary(basis_unitary) || basis_unitary.rows() != d) throw std::invalid_argument("bad basis unitary");
        if (v_cheat.rows() != dC * dQ || v_cheat.cols() != d || !is_isometry(v_cheat))
            throw std::invalid_argument("V_cheat is not an isometry Y -> C ox Q");
        if (v_prepare.rows() != 2 * dS * dT || v_prepare.cols() != 2 * dQ || !is_isometry(v_prepare))
            throw std::invalid_argument("V_prepare is not an isometry R'Q -> R'ST");
    }
};

// |psi> = (1/sqrt(2d)) sum_{x,r} |x>|r>|r> U^r |x> on registers (X, R, R', Y).
inline StateVector build_cs_state(Eigen::Index d, const Mat& u) {
    if (!is_unitary(u) || u.rows() != d) throw std::invalid_argument("U must be a d-dimensional unitary");
    Vec amps = Vec::Zero(d * 2 * 2 * d);
    double norm = 1.0 / std::sqrt(2.0 * double(d));
    for (Eigen::Index x = 0; x < d; ++x) {
        // r = 0: U^0 |x> = |x>
        amps(((x * 2 + 0) * 2 + 0) * d + x) = norm;
        for (Eigen::Index j = 0; j < d; ++j) amps(((x * 2 + 1) * 2 + 1) * d + j) = norm * u(j, x);
    }
    return StateVector(std::move(amps), {d, 2, 2, d});
}

// Honest V_prepare = sum_{r'} |r'><r'| ox (U^{r'})^dag, mapping Q to S with a
// trivial T.
inline Mat honest_prepare(Eigen::Index d, const Mat& u) {
    Mat v = Mat::Zero(2 * d, 2 * d);
    v.block(0, 0, d, d) = Mat::Identity(d, d);
    v.block(d, d, d, d) = u.adjoint();
    return v;
}

inline CheatScenario honest_scenario(Eigen::Index d, const Mat& u) {
    CheatScenario sc;
    sc.d = d;
    sc.basis_unitary = u;
    sc.dC = 1;
    sc.dQ = d;
    sc.v_cheat = Mat::Identity(d, d);
    sc.dS = d;
    sc.dT = 1;
    sc.v_prepare = honest_prepare(d, u);
    sc.kind = "honest";
    sc.validate();
    return sc;
}

enum class CheatKind { PartialMeasure, ControlledRotation, CopyFraction };

// Parameterized cheat channels, all interpolating from honest at theta = 0.
//   partial-measure:     |y> -> cos t |flag>^C |y>^Q + sin t |y>^C |y>^Q
//   controlled-rotation: |y> -> (cos a_y |0> + sin a_y |1>)^C |y>^Q, a_y = t y/(d-1)
//   copy-fraction:       |y> -> normalize(cos t |uniform> + sin t |y>)^C |y>^Q
// V_prepare stays honest; the damage to Q comes from entanglement with C.
inline CheatScenario bob_cheat_family(CheatKind kind, double theta, Eigen::Index d, const Mat& u) {
    if (theta < 0.0 || theta > M_PI / 2.0 + 1e-12) throw std::invalid_argument("theta outside [0, pi/2]");
    CheatScenario sc;
    sc.d = d;
    sc.basis_unitary = u;
    sc.dQ = d;
    sc.dS = d;
    sc.dT = 1;
    sc.v_prepare = honest_prepare(d, u);
    double c = std::cos(theta), s = std::sin(theta);
    switch (kind) {
        case CheatKind::PartialMeasure: {
            sc.dC = d + 1;
            sc.kind = "partial-measure";
            sc.v_cheat = Mat::Zero(sc.dC * d, d);
            for (Eigen::Index y = 0; y < d; ++y) {
                sc.v_cheat(d * d + y, y) = c;  // flag state |d> in C
                sc.v_cheat(y * d + y, y) = s;
            }
            break;
        }
        case CheatKind::ControlledRotation: {
            sc.dC = 2;
            sc.kind = "controlled-rotation";
            sc.v_cheat = Mat::Zero(2 * d, d);
            for (Eigen::Index y = 0; y < d; ++y) {
                double a = (d > 1) ? theta * double(y) / double(d - 1) : 0.0;
                sc.v_cheat(0 * d + y, y) = std::cos(a);
                sc.v_cheat(1 * d + y, y) = std::sin(a);
            }
            break;
        }
        case CheatKind::CopyFraction: {
            sc.dC = d;
            sc.kind = "copy-fraction";
            sc.v_cheat = Mat::Zero(d * d, d);
            double us = 1.0 / std::sqrt(double(d));
            for (Eigen::Index y = 0; y < d; ++y) {
                Vec cy = Vec::Constant(d, c * us);
                cy(y) += s;
                cy /= cy.norm();
                for (Eigen::Index i = 0; i < d; ++i) sc.v_cheat(i * d + y, y) = cy(i);
            }
            break;
        }
    }
    sc.validate();
    return sc;
}

// Diagonal-block conditional ensemble: condition the pure state on the
// computational value of `classical` (and optionally a second classical
// register), keep `target`.
inline Ensemble conditional_ensemble(const StateVector& state, int classical, int target) {
    DensityMatrix joint = reduced_density(state, {classical, target});
    Eigen::Index nc = state.dims[classical], dt = state.dims[target];
    Eigen::VectorXd p(nc);
    std::vector<Mat> states;
    for (Eigen::Index x = 0; x < nc; ++x) {
        Mat block = joint.mat.block(x * dt, x * dt, dt, dt);
        double px = block.trace().real();
        p(x) = px;
        if (px > 1e-14)
            block /= px;
        else
            block = Mat::Identity(dt, dt) / double(dt);
        states.push_back((block + Mat(block.adjoint())) / 2.0);
    }
    p /= p.sum();
    return Ensemble(std::move(p), std::move(states));
}

struct CheatRunResult {
    double epsilon = 0.0;  // detection probability
    double chi_C = 0.0;    // Bob's Holevo gain, averaged over r
    double chi_S = 0.0;
    double chi_Q = 0.0;
    double chi_C_r[2] = {0, 0};  // per basis choice
    double chi_Q_r[2] = {0, 0};
    double chi_S_r[2] = {0, 0};
    double bound = 0.0;          // 4 sqrt(eps) log2 d + 2 mu(2 sqrt(eps))
    double chi_S_lower = 0.0;    // (1 - 4 sqrt(eps)) log2 d - 2 mu(2 sqrt(eps))
};

namespace detail {

// Ensemble over x for fixed r, conditioning on both X and R.
inline Ensemble conditional_ensemble_xr(const StateVector& state, int x_reg, int r_reg, Eigen::Index r_value,
                                        int target) {
    DensityMatrix joint = reduced_density(state, {x_reg, r_reg, target});
    Eigen::Index nx = state.dims[x_reg], nr = state.dims[r_reg], dt = state.dims[target];
    Eigen::VectorXd p(nx);
    std::vector<Mat> states;
    for (Eigen::Index x = 0; x < nx; ++x) {
        Eigen::Index base = (x * nr + r_value) * dt;
        Mat block = joint.mat.block(base, base, dt, dt);
        double px = block.trace().real();
        p(x) = px;
        if (px > 1e-14)
            block /= px;
        else
            block = Mat::Identity(dt, dt) / double(dt);
        states.push_back((block + Mat(block.adjoint())) / 2.0);
    }
    p /= p.sum();
    return Ensemble(std::move(p), std::move(states));
}

}  // namespace detail

// Exact execution: V_cheat on Y, then V_prepare on (R', Q), then the detection
// statistics and the Holevo quantities of the conditional ensembles.
inline CheatRunResult run_cheat_scenario(const CheatScenario& sc) {
    sc.validate();
    Eigen::Index d = sc.d;
    StateVector psi = build_cs_state(d, sc.basis_unitary);           // X R R' Y
    StateVector after_cheat = apply_to_registers(psi, sc.v_cheat, {3}, {sc.dC, sc.dQ});  // X R R' C Q
    StateVector final_state =
        apply_to_registers(after_cheat, sc.v_prepare, {2, 4}, {2, sc.dS, sc.dT});  // X R R' S T C

    CheatRunResult res;
    // Detection: Alice compares her measurement of S with X.
    DensityMatrix xs = reduced_density(final_state, {0, 3});
    double agree = 0.0;
    for (Eigen::Index x = 0; x < d; ++x) agree += std::real(xs.mat(x * sc.dS + x, x * sc.dS + x));
    res.epsilon = std::clamp(1.0 - agree, 0.0, 1.0);
    if (res.epsilon < 1e-12) res.epsilon = 0.0;  // roundoff floor; honest runs are exactly zero

    res.chi_C = holevo_chi(conditional_ensemble(after_cheat, 0, 3));
    res.chi_Q = holevo_chi(conditional_ensemble(after_cheat, 0, 4));
    res.chi_S = holevo_chi(conditional_ensemble(final_state, 0, 3));
    for (Eigen::Index r = 0; r < 2; ++r) {
        res.chi_C_r[r] = holevo_chi(detail::conditional_ensemble_xr(after_cheat, 0, 1, r, 3));
        res.chi_Q_r[r] = holevo_chi(detail::conditional_ensemble_xr(after_cheat, 0, 1, r, 4));
        res.chi_S_r[r] = holevo_chi(detail::conditional_ensemble_xr(final_state, 0, 1, r, 3));
    }
    double se = std::sqrt(res.epsilon);
    res.bound = 4.0 * se * std::log2(double(d)) + 2.0 * mu(2.0 * se);
    res.chi_S_lower = (1.0 - 4.0 * se) * std::log2(double(d)) - 2.0 * mu(2.0 * se);
    return res;
}

}  // namespace qbsc
