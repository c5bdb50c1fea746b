#pragma once

#include <string>

#include "qbsc/ensemble.hpp"

namespace qbsc {

// H_2(rho_AB | rho) = -log2 Tr[((1 ox rho^{-1/2}) rho_AB)^2], evaluated on the
// block structure of the classical-quantum joint: the trace reduces to
// sum_x p_x^2 Tr(rho^{-1/2} rho_x rho^{-1/2} rho_x). The inverse square root
// is support-restricted.
inline double collision_conditional_entropy(const Ensemble& ens) {
    Mat r = inv_sqrt_on_support(ens.average());
    double t = 0.0;
    for (Eigen::Index x = 0; x < ens.size(); ++x) {
        double p = ens.priors(x);
        Mat a = r * ens.states[x] * r;
        t += p * p * (a * ens.states[x]).trace().real();
    }
    return -std::log2(t);
}

// xi(E) = n - H_2(rho_AB | rho); requires an ensemble over n-bit strings.
inline double xi(const Ensemble& ens) {
    return double(ens.n_bits()) - collision_conditional_entropy(ens);
}

enum class GuessStrategy { SquareRoot, Exhaustive, Custom };

struct GuessReport {
    GuessStrategy strategy;
    std::vector<Mat> povm;  // one element per string, plus a reject element on the kernel
    double success_probability;
    Eigen::VectorXd per_string;  // p^B_{x|x}
};

// Square-root measurement M_x = p_x rho^{-1/2} rho_x rho^{-1/2}; the kernel of
// rho gets a designated reject element so the POVM stays complete.
inline GuessReport srm_guess(const Ensemble& ens) {
    Mat r = inv_sqrt_on_support(ens.average());
    GuessReport rep;
    rep.strategy = GuessStrategy::SquareRoot;
    rep.per_string.resize(ens.size());
    Mat sum = Mat::Zero(ens.dim(), ens.dim());
    for (Eigen::Index x = 0; x < ens.size(); ++x) {
        Mat m = ens.priors(x) * (r * ens.states[x] * r);
        m = (m + Mat(m.adjoint())) / 2.0;
        rep.per_string(x) = (m * ens.states[x]).trace().real();
        sum += m;
        rep.povm.push_back(std::move(m));
    }
    Mat reject = Mat::Identity(ens.dim(), ens.dim()) - sum;  // kernel projector
    rep.povm.push_back((reject + Mat(reject.adjoint())) / 2.0);
    rep.success_probability = ens.priors.dot(rep.per_string);
    return rep;
}

// Holevo information chi(E) = H(rho) - sum_x p_x H(rho_x), in bits.
inline double holevo_chi(const Ensemble& ens) {
    double h = von_neumann_entropy(ens.average());
    for (Eigen::Index x = 0; x < ens.size(); ++x)
        if (ens.priors(x) > 0.0) h -= ens.priors(x) * von_neumann_entropy(ens.states[x]);
    return h;
}

// d(E) = delta(rho_AB, 1/2^n ox rho). Block diagonal, so the trace norm splits
// per string.
inline double ensemble_uniformity_distance(const Ensemble& ens) {
    int n = ens.n_bits();
    double u = 1.0 / double(Eigen::Index(1) << n);
    Mat rho = ens.average();
    double d = 0.0;
    for (Eigen::Index x = 0; x < ens.size(); ++x) d += 0.5 * trace_norm(ens.priors(x) * ens.states[x] - u * rho);
    return d;
}

// I(tau; Lambda) = H(tau) + H(Lambda(tau)) - H((1 ox Lambda)(psi_d)) with
// psi_d maximally entangled.
inline double channel_mutual_info(const QuantumChannel& ch, Eigen::Index d) {
    if (ch.input_dim() != d) throw std::invalid_argument("channel input dimension mismatch");
    Mat tau = Mat::Identity(d, d) / double(d);
    Mat psi = maximally_entangled(d).density();
    Mat out = apply_to_second(ch, psi, d);
    return std::log2(double(d)) + von_neumann_entropy(ch.apply(tau)) - von_neumann_entropy(out);
}

// mu(x) = min{-x log2 x, 1/e}, mu(0) = 0. For x > 1 the raw expression
// goes negative; the cap 1/e applies instead so the bound stays monotone.
inline double mu(double x) {
    if (x < 0.0) throw std::domain_error("mu: negative input");
    if (x == 0.0) return 0.0;
    return std::min(std::abs(x * std::log2(x)), 1.0 / std::exp(1.0));
}

// Perturbation bound 4 sqrt(eps) log2 d + 2 mu(2 sqrt(eps)).
inline double fannes_ensemble_bound(double eps, Eigen::Index d) {
    if (eps < 0.0 || eps > 1.0) throw std::domain_error("eps outside [0,1]");
    double s = std::sqrt(eps);
    return 4.0 * s * std::log2(double(d)) + 2.0 * mu(2.0 * s);
}

// Exact I(X;Y) of the joint distribution p_x Tr(M_y rho_x).
inline double measurement_mutual_information(const Ensemble& ens, const std::vector<Mat>& povm) {
    Eigen::Index N = ens.size(), K = Eigen::Index(povm.size());
    Eigen::MatrixXd joint(N, K);
    for (Eigen::Index x = 0; x < N; ++x)
        for (Eigen::Index y = 0; y < K; ++y) joint(x, y) = std::max(0.0, ens.priors(x) * (povm[y] * ens.states[x]).trace().real());
    Eigen::VectorXd py = joint.colwise().sum();
    double info = 0.0;
    for (Eigen::Index x = 0; x < N; ++x)
        for (Eigen::Index y = 0; y < K; ++y) {
            double j = joint(x, y);
            if (j > 0.0 && ens.priors(x) > 0.0 && py(y) > 0.0) info += j * std::log2(j / (ens.priors(x) * py(y)));
        }
    return info;
}

namespace detail {

inline std::vector<Mat> symmetric_completion(const std::vector<Mat>& elems, Eigen::Index d) {
    Mat s = Mat::Zero(d, d);
    for (const Mat& e : elems) s += e;
    Mat si = inv_sqrt_on_support(s);
    // If s is rank deficient, park the leftover weight on the kernel projector
    // appended to the last element.
    std::vector<Mat> out;
    Mat total = Mat::Zero(d, d);
    for (const Mat& e : elems) {
        Mat m = si * e * si;
        m = (m + Mat(m.adjoint())) / 2.0;
        total += m;
        out.push_back(std::move(m));
    }
    Mat gap = Mat::Identity(d, d) - total;
    if (gap.cwiseAbs().maxCoeff() > 1e-12 && !out.empty()) out.back() += gap;
    return out;
}

// One see-saw pass: reweight each element by its shifted gradient operator and
// renormalize to a POVM.
inline std::vector<Mat> seesaw_step(const Ensemble& ens, const std::vector<Mat>& povm) {
    Eigen::Index d = ens.dim(), N = ens.size();
    Eigen::Index K = Eigen::Index(povm.size());
    Eigen::MatrixXd joint(N, K);
    for (Eigen::Index x = 0; x < N; ++x)
        for (Eigen::Index y = 0; y < K; ++y) joint(x, y) = std::max(0.0, ens.priors(x) * (povm[y] * ens.states[x]).trace().real());
    Eigen::VectorXd py = joint.colwise().sum();

    std::vector<Mat> grad(K);
    double shift = 0.0;
    for (Eigen::Index y = 0; y < K; ++y) {
        Mat r = Mat::Zero(d, d);
        if (py(y) > 1e-300) {
            for (Eigen::Index x = 0; x < N; ++x) {
                double pxy = joint(x, y) / py(y);
                if (pxy > 0.0 && ens.priors(x) > 0.0) r += ens.priors(x) * std::log2(pxy / ens.priors(x)) * ens.states[x];
            }
        }
        r = (r + Mat(r.adjoint())) / 2.0;
        Eigen::SelfAdjointEigenSolver<Mat> es(r);
        shift = std::max(shift, -es.eigenvalues().minCoeff());
        grad[y] = std::move(r);
    }
    shift += 1e-6;
    std::vector<Mat> next(K);
    for (Eigen::Index y = 0; y < K; ++y) {
        Mat r = grad[y] + shift * Mat::Identity(d, d);
        next[y] = r * povm[y] * r;
    }
    return symmetric_completion(next, d);
}

}  // namespace detail

struct AccessibleInfoResult {
    double lower_bound;
    std::vector<Mat> povm;
};

// Certified lower bound on I_acc by see-saw ascent over POVMs with at most d^2
// elements. Restart 0 is the computational basis (a fixed point for orthogonal
// ensembles); the rest start from random rank-one elements. Deterministic in
// the seed. The result never exceeds holevo_chi within numerical tolerance.
inline AccessibleInfoResult accessible_info_estimate(const Ensemble& ens, int restarts = 32, int iters = 500,
                                                     std::uint64_t seed = 0) {
    Eigen::Index d = ens.dim();
    Eigen::Index K = d * d;
    AccessibleInfoResult best{-1.0, {}};

    auto run = [&](std::vector<Mat> povm) {
        double info = measurement_mutual_information(ens, povm);
        std::vector<Mat> best_povm = povm;
        double best_info = info;
        for (int it = 0; it < iters; ++it) {
            povm = detail::seesaw_step(ens, povm);
            double next = measurement_mutual_information(ens, povm);
            if (next > best_info) {
                best_info = next;
                best_povm = povm;
            }
            if (std::abs(next - info) < 1e-9) break;
            info = next;
        }
        if (best_info > best.lower_bound) best = {best_info, std::move(best_povm)};
    };

    {
        std::vector<Mat> comp;
        for (Eigen::Index i = 0; i < d; ++i) comp.push_back(basis_state(d, i).density());
        run(std::move(comp));
    }
    for (int t = 0; t < restarts; ++t) {
        auto rng = make_rng(seed, "seesaw-restart", std::uint64_t(t));
        std::vector<Mat> elems;
        for (Eigen::Index k = 0; k < K; ++k) {
            Vec v = random_pure_state(d, rng);
            elems.push_back(v * v.adjoint());
        }
        run(detail::symmetric_completion(elems, d));
    }
    return best;
}

}  // namespace qbsc
