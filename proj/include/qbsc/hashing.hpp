#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

#include "qbsc/ensemble.hpp"
#include "qbsc/metrics.hpp"

namespace qbsc {

// Two-universal family over n-bit strings: y = msb_s(key * x) with
// multiplication in GF(2^n). Bit 0 is the constant term; "first s bits" are
// the s most significant coefficients.

// Irreducible polynomials for GF(2^n), n = 1..16, stored with the x^n bit set.
inline constexpr std::array<std::uint32_t, 17> kIrreduciblePoly = {
    0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,    0x83,   0x11B,
    0x211,   0x409,  0x805,  0x1053, 0x201B, 0x402B, 0x8003,  0x1100B};

inline std::uint32_t gf2n_mul(std::uint32_t a, std::uint32_t b, int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("GF(2^n) supported for n in 1..16");
    std::uint32_t poly = kIrreduciblePoly[n];
    std::uint32_t mask = (1u << n) - 1;
    std::uint32_t acc = 0;
    a &= mask;
    b &= mask;
    while (b) {
        if (b & 1) acc ^= a;
        b >>= 1;
        a <<= 1;
        if (a >> n) a ^= poly;
    }
    return acc & mask;
}

struct HashFunction {
    int n = 0;  // input bits
    int s = 0;  // output bits
    std::uint32_t key = 1;

    HashFunction() = default;
    HashFunction(int n_, int s_, std::uint32_t key_) : n(n_), s(s_), key(key_) {
        if (n < 1 || n > 16 || s < 0 || s > n) throw std::invalid_argument("bad hash parameters");
        if (key == 0 || key >= (1u << n)) throw std::invalid_argument("key must be a nonzero n-bit value");
    }

    std::uint32_t eval(std::uint32_t x) const { return gf2n_mul(key, x, n) >> (n - s); }

    std::vector<std::uint32_t> preimage(std::uint32_t y) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t x = 0; x < (1u << n); ++x)
            if (eval(x) == y) out.push_back(x);
        return out;
    }

    std::string serialize() const {
        char buf[48];
        std::snprintf(buf, sizeof buf, "(%d,%d,0x%x)", n, s, key);
        return buf;
    }
};

struct HashFamily {
    int n = 0, s = 0;
    std::vector<HashFunction> members;

    HashFamily() = default;

    // All 2^n - 1 nonzero keys for n <= 8; a seeded uniform sample of 4096
    // keys above that.
    static HashFamily make(int n, int s, std::uint64_t seed = 0) {
        HashFamily fam;
        fam.n = n;
        fam.s = s;
        if (n <= 8) {
            for (std::uint32_t k = 1; k < (1u << n); ++k) fam.members.emplace_back(n, s, k);
        } else {
            auto rng = make_rng(seed, "hash-family");
            std::uniform_int_distribution<std::uint32_t> dist(1, (1u << n) - 1);
            for (int i = 0; i < 4096; ++i) fam.members.emplace_back(n, s, dist(rng));
        }
        return fam;
    }
};

// E_g: priors q^g_y = sum_{x in g^{-1}(y)} p_x, states the normalized preimage
// averages. The average state is preserved exactly.
inline Ensemble hashed_ensemble(const Ensemble& ens, const HashFunction& g) {
    if (ens.size() != (Eigen::Index(1) << g.n)) throw std::invalid_argument("ensemble size does not match hash input bits");
    Eigen::Index ny = Eigen::Index(1) << g.s;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(ny);
    std::vector<Mat> sigma(ny, Mat::Zero(ens.dim(), ens.dim()));
    for (std::uint32_t x = 0; x < std::uint32_t(ens.size()); ++x) {
        std::uint32_t y = g.eval(x);
        q(y) += ens.priors(x);
        sigma[y] += ens.priors(x) * ens.states[x];
    }
    for (Eigen::Index y = 0; y < ny; ++y) {
        if (q(y) > 0.0)
            sigma[y] /= q(y);
        else
            sigma[y] = ens.average();  // empty label: convention, never hit for this linear family
    }
    return Ensemble(std::move(q), std::move(sigma));
}

struct PaBound {
    double lhs;  // family average of d(E_g)
    double rhs;  // (1/2) 2^{-(H_2 - s)/2}
};

// Privacy-amplification bound: average of d(E_g) over the family against
// (1/2) 2^{-[H_2(rho_AB|rho) - s]/2}.
inline PaBound pa_average_distance(const Ensemble& ens, int s, const HashFamily& family) {
    if (family.s != s || family.n != ens.n_bits()) throw std::invalid_argument("family does not match ensemble");
    double acc = 0.0;
    for (const HashFunction& g : family.members) acc += ensemble_uniformity_distance(hashed_ensemble(ens, g));
    double h2 = collision_conditional_entropy(ens);
    return {acc / double(family.members.size()), 0.5 * std::pow(2.0, -0.5 * (h2 - double(s)))};
}

struct BestHash {
    HashFunction g;
    double d;  // d(E_g)
};

inline BestHash best_hash(const Ensemble& ens, const HashFamily& family) {
    BestHash best{family.members.front(), std::numeric_limits<double>::infinity()};
    for (const HashFunction& g : family.members) {
        double d = ensemble_uniformity_distance(hashed_ensemble(ens, g));
        if (d < best.d) {
            best.g = g;
            best.d = d;
        }
    }
    return best;
}

}  // namespace qbsc
