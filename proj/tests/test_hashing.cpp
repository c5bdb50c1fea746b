#include "doctest.h"
#include "oracles.hpp"
#include "qbsc/hashing.hpp"

using namespace qbsc;

TEST_CASE("gf multiplication against a field-table oracle at n=4") {
    // mod x^4 + x + 1: x * x^3 = x^4 = x + 1
    CHECK(gf2n_mul(0b0010, 0b1000, 4) == 0b0011);
    // 1 is the identity
    for (std::uint32_t x = 0; x < 16; ++x) CHECK(gf2n_mul(1, x, 4) == x);
    // commutativity and distributivity over the full 16-element table
    for (std::uint32_t a = 0; a < 16; ++a)
        for (std::uint32_t b = 0; b < 16; ++b) {
            CHECK(gf2n_mul(a, b, 4) == gf2n_mul(b, a, 4));
            for (std::uint32_t c = 0; c < 16; ++c)
                CHECK(gf2n_mul(a, b ^ c, 4) == (gf2n_mul(a, b, 4) ^ gf2n_mul(a, c, 4)));
        }
}

TEST_CASE("every nonzero element has an inverse (field check, n<=8)") {
    for (int n : {1, 2, 3, 4, 5, 6, 7, 8}) {
        for (std::uint32_t a = 1; a < (1u << n); ++a) {
            bool found = false;
            for (std::uint32_t b = 1; b < (1u << n); ++b)
                if (gf2n_mul(a, b, n) == 1) {
                    found = true;
                    break;
                }
            CHECK(found);
        }
    }
}

TEST_CASE("hash evaluation conventions") {
    HashFunction id4(4, 2, 1);
    for (std::uint32_t x = 0; x < 16; ++x) CHECK(id4.eval(x) == x >> 2);  // key 1: first s bits of x
    HashFunction g(4, 2, 0b0010);
    CHECK(g.eval(0) == 0);  // field zero maps to zero for every key
    CHECK(g.eval(0b1000) == 0b00);  // product 0b0011, top two bits
    CHECK_THROWS(HashFunction(4, 2, 0));  // zero key excluded
}

TEST_CASE("preimages partition the cube with uniform size") {
    HashFunction g(4, 2, 0b0111);
    std::vector<bool> seen(16, false);
    for (std::uint32_t y = 0; y < 4; ++y) {
        auto pre = g.preimage(y);
        CHECK(pre.size() == 4);  // 2^{n-s}, linear family
        for (auto x : pre) {
            CHECK(!seen[x]);
            seen[x] = true;
        }
    }
    for (bool b : seen) CHECK(b);

    HashFunction id(4, 2, 1);
    auto pre = id.preimage(0b11);
    for (auto x : pre) CHECK((x >> 2) == 0b11);
    CHECK(pre.size() == 4);
}

TEST_CASE("two-universality exhaustively for n <= 8") {
    for (int n : {2, 4, 6, 8}) {
        for (int s = 1; s <= n; s += (n > 4 ? 3 : 1)) {
            HashFamily fam = HashFamily::make(n, s);
            std::uint32_t N = 1u << n;
            double worst = 0.0;
            for (std::uint32_t x = 0; x < N; ++x)
                for (std::uint32_t xp = x + 1; xp < N; ++xp) {
                    int coll = 0;
                    for (const auto& g : fam.members)
                        if (g.eval(x) == g.eval(xp)) ++coll;
                    worst = std::max(worst, double(coll) / double(fam.members.size()));
                }
            CHECK(worst <= std::pow(2.0, -s) + 1e-12);
        }
    }
}

TEST_CASE("hashed ensemble preserves the average state") {
    auto rng = make_rng(71, "hashed-avg");
    Ensemble ens = oracle::random_ensemble(16, 2, rng);
    Mat rho = ens.average();
    for (std::uint32_t key = 1; key < 16; ++key) {
        Ensemble h = hashed_ensemble(ens, HashFunction(4, 2, key));
        CHECK(trace_distance(h.average(), rho) <= 1e-10);
    }
}

TEST_CASE("hashed ensemble special cases") {
    auto rng = make_rng(72, "hashed-cases");
    Ensemble ens = oracle::random_ensemble(4, 2, rng);
    // s = n with key 1 permutes (here: reproduces) the ensemble
    Ensemble full = hashed_ensemble(ens, HashFunction(2, 2, 1));
    for (Eigen::Index x = 0; x < 4; ++x) {
        CHECK(full.priors(x) == doctest::Approx(ens.priors(x)));
        CHECK(trace_distance(full.states[x], ens.states[x]) < 1e-12);
    }
    // s = 0 coarse-grains everything to the average
    Ensemble coarse = hashed_ensemble(ens, HashFunction(2, 0, 1));
    CHECK(coarse.size() == 1);
    CHECK(trace_distance(coarse.states[0], ens.average()) < 1e-12);

    // orthogonal uniform, n=2 s=1: two states uniform over their preimages
    Ensemble orth = hashed_ensemble(Ensemble::orthogonal(4), HashFunction(2, 1, 1));
    CHECK(orth.priors(0) == doctest::Approx(0.5));
    CHECK(orth.states[0].trace().real() == doctest::Approx(1.0));
}

TEST_CASE("privacy amplification bound on random ensembles") {
    // identical states: lhs is exactly 0
    auto rng = make_rng(73, "pa");
    Mat rho = random_density_matrix(2, rng);
    Ensemble identical = Ensemble::uniform(std::vector<Mat>(16, rho));
    HashFamily fam = HashFamily::make(4, 2);
    PaBound pb = pa_average_distance(identical, 2, fam);
    CHECK(pb.lhs == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(pb.lhs <= pb.rhs + 1e-9);

    // orthogonal: vacuous regime, rhs >= 1
    PaBound orth = pa_average_distance(Ensemble::orthogonal(16), 2, fam);
    CHECK(orth.rhs >= 1.0);
    CHECK(orth.lhs <= orth.rhs + 1e-9);

    for (int t = 0; t < 10; ++t) {
        auto r2 = make_rng(74, "pa-random", t);
        Ensemble ens = oracle::random_ensemble(16, 2, r2);
        for (int s = 0; s <= 4; ++s) {
            PaBound b = pa_average_distance(ens, s, HashFamily::make(4, s));
            CHECK(b.lhs <= b.rhs + 1e-9);
        }
    }
}

TEST_CASE("per-y split of d(E_g) when d(E_g) <= eps") {
    auto rng = make_rng(75, "per-y");
    Ensemble ens = oracle::random_ensemble(16, 2, rng);
    for (int s = 1; s <= 3; ++s) {
        for (const auto& g : HashFamily::make(4, s).members) {
            Ensemble h = hashed_ensemble(ens, g);
            double eps = ensemble_uniformity_distance(h);
            Mat sigma = h.average();
            double split = 0.0;
            for (Eigen::Index y = 0; y < h.size(); ++y) split += trace_distance(sigma, h.states[y]);
            split *= std::pow(2.0, -s);
            CHECK(split <= 2.0 * eps + 1e-9);
        }
    }
}

TEST_CASE("best hash minimizes and never beats zero") {
    auto rng = make_rng(76, "best-hash");
    Mat rho = random_density_matrix(2, rng);
    Ensemble identical = Ensemble::uniform(std::vector<Mat>(16, rho));
    HashFamily fam = HashFamily::make(4, 1);
    BestHash bh = best_hash(identical, fam);
    CHECK(bh.d == doctest::Approx(0.0).epsilon(1e-10));

    Ensemble ens = oracle::random_ensemble(16, 2, rng);
    PaBound pb = pa_average_distance(ens, 1, fam);
    CHECK(best_hash(ens, fam).d <= pb.lhs + 1e-12);  // min <= mean
}

TEST_CASE("sampled family for n > 8 stays two-universal statistically") {
    HashFamily fam = HashFamily::make(10, 4, 5);
    CHECK(fam.members.size() == 4096);
    auto rng = make_rng(77, "sampled-2u");
    // random pair probes with a 3-sigma gate around the 2^{-s} target
    for (int t = 0; t < 20; ++t) {
        std::uint32_t x = std::uint32_t(rng() % 1024), xp = std::uint32_t(rng() % 1024);
        if (x == xp) continue;
        int coll = 0;
        for (const auto& g : fam.members)
            if (g.eval(x) == g.eval(xp)) ++coll;
        double p = 1.0 / 16.0;
        double sigma = std::sqrt(p * (1 - p) * 4096.0);
        CHECK(double(coll) <= 4096.0 * p + 3.0 * sigma);
    }
}
