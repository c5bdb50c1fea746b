// qbsc: seeded experiment harness for the LOCKCOM simulator.
//
// Commands: run-protocol | attack | sweep-cheat | locking | verify-bounds.
// Configuration comes from a JSON document (--config); any flag given on the
// command line wins over the config file. Exit codes: 0 pass, 1 check
// failure, 2 usage error. QBSC_LOG={error,info,debug} controls stderr noise.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbsc/attack.hpp"
#include "qbsc/cheat.hpp"
#include "qbsc/locking.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qbsc;

constexpr const char* kVersion = "0.1.0";

int log_level() {
    static int level = [] {
        const char* env = std::getenv("QBSC_LOG");
        if (!env) return 0;
        std::string s(env);
        if (s == "debug") return 2;
        if (s == "info") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[qbsc] " << msg << "\n";
}

// 12 significant digits, '.' decimal, no locale surprises.
std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct CheckRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    double slack = 0.0;
};

struct ReportEnvelope {
    std::string command;
    json config;
    std::vector<CheckRecord> records;

    bool all_pass() const {
        for (const CheckRecord& r : records)
            if (!r.pass) return false;
        return true;
    }

    json to_json() const {
        json j;
        j["artifact"] = "qbsc";
        j["version"] = kVersion;
        j["command"] = command;
        j["config"] = config;
        json recs = json::array();
        for (const CheckRecord& r : records) {
            json rec;
            rec["name"] = r.name;
            rec["lhs"] = fmt12(r.lhs);
            rec["rhs"] = fmt12(r.rhs);
            rec["pass"] = r.pass;
            rec["slack"] = fmt12(r.slack);
            recs.push_back(rec);
        }
        j["records"] = recs;
        return j;
    }
};

// Write-once, atomic: temp file in the same directory, then rename.
void write_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, p);
}

void emit_report(const ReportEnvelope& rep, const std::string& out_path) {
    std::string body = rep.to_json().dump(2);
    body += "\n";
    if (out_path.empty())
        std::cout << body;
    else
        write_atomic(out_path, body);
}

// Index-ordered parallel map; results are identical to the sequential run.
template <typename F>
void parallel_for(int count, int jobs, F&& body) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int workers = std::min(jobs, count);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (std::thread& t : pool) t.join();
}

// Options merged from config file and command line; command line wins.
struct Options {
    json cfg = json::object();
    std::string out_path;
    std::string csv_path;
    std::uint64_t seed = 0;
    int jobs = 1;

    double num(const std::string& key, double fallback) const {
        return cfg.contains(key) ? cfg[key].get<double>() : fallback;
    }
    int integer(const std::string& key, int fallback) const {
        return cfg.contains(key) ? cfg[key].get<int>() : fallback;
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        return cfg.contains(key) ? cfg[key].get<std::string>() : fallback;
    }
};

UnitarySet unitaries_from(const Options& opt, int n) {
    std::string kind = opt.text("unitaries", "identity-hadamard");
    if (kind == "identity-hadamard") return identity_hadamard_set(n);
    if (kind == "fourier-pair") return fourier_pair_set(opt.integer("d", 1 << n));
    if (kind == "haar") return haar_set(Eigen::Index(1) << n, opt.integer("k_bases", 2), opt.seed);
    throw CLI::ValidationError("unitaries", "unknown unitary set: " + kind);
}

// ---------------------------------------------------------------------------
// run-protocol: honest commit/reveal over every (x, r); completeness stats.

int cmd_run_protocol(const Options& opt) {
    int n = opt.integer("n", 3);
    ProtocolInstance inst(n, unitaries_from(opt, n));
    Eigen::Index accepts = 0, runs = 0;
    for (Eigen::Index x = 0; x < inst.dim(); ++x)
        for (Eigen::Index r = 0; r < inst.basis_count(); ++r) {
            Transcript t = lockcom_commit(inst, x, r);
            if (lockcom_reveal(inst, t, x, r) == Verdict::Accept) ++accepts;
            ++runs;
        }
    ReportEnvelope rep;
    rep.command = "run-protocol";
    rep.config = opt.cfg;
    rep.records.push_back({"completeness", double(accepts), double(runs), accepts == runs,
                           double(accepts) - double(runs)});
    log_info("honest runs: " + std::to_string(accepts) + "/" + std::to_string(runs) + " accepted");
    emit_report(rep, opt.out_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// attack: Alice's hashing attack against the claimed concealment level.

int cmd_attack(const Options& opt) {
    int n = opt.integer("n", 6);
    if (n > 8) throw CLI::ValidationError("n", "full-family hashing limited to n <= 8");
    double b = opt.num("b_claimed", double(n) / 2.0);
    double gamma = opt.num("gamma", kDefaultGamma);
    if (b >= double(n)) throw CLI::ValidationError("b_claimed", "claimed concealment must be below n");

    ProtocolInstance inst(n, unitaries_from(opt, n));
    AliceAttackReport att = alice_attack(inst, b, gamma);

    ReportEnvelope rep;
    rep.command = "attack";
    rep.config = opt.cfg;
    bool bound_ok = att.vacuous || att.total_success >= att.analytic_lower_bound - 1e-6;
    rep.records.push_back({"attack-success-vs-bound", att.total_success, att.analytic_lower_bound, bound_ok,
                           att.total_success - att.analytic_lower_bound});
    double worst_lemma3 = 0.0;
    for (Eigen::Index y = 0; y < att.per_y_success.size(); ++y)
        worst_lemma3 = std::min(worst_lemma3, att.per_y_success(y) - att.per_y_lemma3_bound(y));
    rep.records.push_back({"uhlmann-reveal-vs-lemma3", worst_lemma3, -1e-6, worst_lemma3 >= -1e-6, worst_lemma3});

    json& j = rep.config;
    j["attack_report"] = {{"n", att.n},
                          {"m_requested", att.m_requested},
                          {"m", att.m},
                          {"b_claimed", fmt12(att.b_claimed)},
                          {"gamma", fmt12(att.gamma)},
                          {"hash_g", att.g.serialize()},
                          {"y0", att.y0},
                          {"epsilon", fmt12(att.epsilon)},
                          {"total_success", fmt12(att.total_success)},
                          {"implied_a", fmt12(att.implied_a)},
                          {"analytic_lower_bound", fmt12(att.analytic_lower_bound)},
                          {"vacuous", att.vacuous}};
    json per_y = json::array();
    for (Eigen::Index y = 0; y < att.per_y_success.size(); ++y)
        per_y.push_back({{"success", fmt12(att.per_y_success(y))},
                         {"delta", fmt12(att.per_y_delta(y))},
                         {"lemma3_bound", fmt12(att.per_y_lemma3_bound(y))},
                         {"overlap", fmt12(att.per_y_overlap(y))}});
    j["attack_report"]["per_y"] = per_y;
    if (att.vacuous) log_info("analytic bound vacuous at n=" + std::to_string(n) + "; report is descriptive");
    emit_report(rep, opt.out_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep-cheat: Bob cheat family sweep, CSV of (theta, epsilon, chi_C, bound, slack).

CheatKind parse_kind(const std::string& s) {
    if (s == "partial-measure") return CheatKind::PartialMeasure;
    if (s == "controlled-rotation") return CheatKind::ControlledRotation;
    if (s == "copy-fraction") return CheatKind::CopyFraction;
    throw CLI::ValidationError("kind", "unknown cheat kind: " + s);
}

int cmd_sweep_cheat(const Options& opt) {
    std::string kind_name = opt.text("kind", "partial-measure");
    CheatKind kind = parse_kind(kind_name);
    Eigen::Index d = opt.integer("d", 2);
    int points = opt.integer("theta_points", 16);
    if (points < 1) throw CLI::ValidationError("theta_points", "grid must be nonempty");
    Mat u = (d == 2) ? hadamard() : fourier_matrix(d);

    std::vector<CheatRunResult> results(points);
    std::vector<double> thetas(points);
    parallel_for(points, opt.jobs, [&](int i) {
        thetas[i] = (points == 1) ? 0.0 : (M_PI / 2.0) * double(i) / double(points - 1);
        results[i] = run_cheat_scenario(bob_cheat_family(kind, thetas[i], d, u));
    });

    std::ostringstream csv;
    csv << "theta,epsilon,chi_C,bound,slack\n";
    double worst_slack = std::numeric_limits<double>::infinity();
    int worst_i = 0;
    for (int i = 0; i < points; ++i) {
        double slack = results[i].bound - results[i].chi_C;
        if (slack < worst_slack) {
            worst_slack = slack;
            worst_i = i;
        }
        csv << fmt12(thetas[i]) << ',' << fmt12(results[i].epsilon) << ',' << fmt12(results[i].chi_C) << ','
            << fmt12(results[i].bound) << ',' << fmt12(slack) << '\n';
    }
    if (!opt.csv_path.empty())
        write_atomic(opt.csv_path, csv.str());
    else
        std::cout << csv.str();

    ReportEnvelope rep;
    rep.command = "sweep-cheat";
    rep.config = opt.cfg;
    rep.records.push_back({"cheat-sensitivity-bound", results[worst_i].chi_C, results[worst_i].bound + 1e-7,
                           worst_slack >= -1e-7, worst_slack});
    rep.records.push_back({"honest-endpoint", results[0].chi_C, 1e-6,
                           results[0].epsilon == 0.0 && results[0].chi_C <= 1e-6, 1e-6 - results[0].chi_C});
    emit_report(rep, opt.out_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// locking: Haar-random-basis experiment, CSV of (k, seed, chi, iacc_lower).

int cmd_locking(const Options& opt) {
    int n = opt.integer("n", 2);
    std::vector<int> ks;
    if (opt.cfg.contains("k_list"))
        for (const auto& k : opt.cfg["k_list"]) ks.push_back(k.get<int>());
    else
        ks = {1, 2, 4, 8, 16};
    int seeds = opt.integer("seeds", 1);
    int restarts = opt.integer("restarts", 32);
    int iters = opt.integer("iters", 500);
    bool with_iacc = opt.integer("estimate_iacc", n <= 2 ? 1 : 0) != 0;

    struct Row {
        int k;
        std::uint64_t seed;
        LockingReport rep;
    };
    std::vector<Row> rows(ks.size() * size_t(seeds));
    parallel_for(int(rows.size()), opt.jobs, [&](int i) {
        int k = ks[size_t(i) / size_t(seeds)];
        std::uint64_t s = derive_seed(opt.seed, "locking-base", std::uint64_t(i));
        rows[size_t(i)] = {k, s, locking_experiment(n, k, s, with_iacc ? restarts : 0, iters)};
    });

    std::ostringstream csv;
    csv << "k,seed,binding_a,chi,iacc_lower\n";
    for (const Row& r : rows)
        csv << r.k << ',' << r.seed << ',' << fmt12(r.rep.binding_a) << ',' << fmt12(r.rep.chi) << ','
            << fmt12(r.rep.iacc_lower) << '\n';
    if (!opt.csv_path.empty())
        write_atomic(opt.csv_path, csv.str());
    else
        std::cout << csv.str();

    ReportEnvelope rep;
    rep.command = "locking";
    rep.config = opt.cfg;
    double max_chi = 0.0;
    for (const Row& r : rows) max_chi = std::max(max_chi, r.rep.chi);
    rep.records.push_back({"holevo-cap", max_chi, double(n), max_chi <= double(n) + 1e-9, double(n) - max_chi});
    emit_report(rep, opt.out_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-bounds: one record per named inequality across the modules.

Ensemble random_ensemble(Eigen::Index n_states, Eigen::Index d, std::mt19937_64& rng, bool pure) {
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

int cmd_verify_bounds(const Options& opt, const std::string& perturb) {
    std::uint64_t seed = opt.seed;
    ReportEnvelope rep;
    rep.command = "verify-bounds";
    rep.config = opt.cfg;
    rep.config["seed"] = seed;

    // Tracks the worst (lhs, rhs) pair over a sample of instances.
    struct Worst {
        double lhs = 0.0, rhs = 0.0;
        double slack = std::numeric_limits<double>::infinity();
        void feed(double l, double r) {
            if (r - l < slack) {
                slack = r - l;
                lhs = l;
                rhs = r;
            }
        }
    };
    auto record = [&](const std::string& name, const Worst& w, double tol) {
        double slack = w.slack + (perturb == name ? -2.0 * std::abs(w.slack) - 1.0 : 0.0);
        rep.records.push_back({name, w.lhs, w.rhs, slack >= -tol, slack});
    };

    {
        Worst w;
        for (int t = 0; t < 50; ++t) {
            auto rng = make_rng(seed, "vb-lemma1", std::uint64_t(t));
            Ensemble ens = random_ensemble(2 + Eigen::Index(rng() % 15), 2 + Eigen::Index(rng() % 15), rng, t % 2 == 0);
            w.feed(std::pow(2.0, -collision_conditional_entropy(ens)), srm_guess(ens).success_probability);
        }
        record("lemma1-guessing", w, 1e-10);
    }
    {
        Worst w;
        for (int t = 0; t < 10; ++t) {
            auto rng = make_rng(seed, "vb-pa", std::uint64_t(t));
            Ensemble ens = random_ensemble(16, 3, rng, t % 2 == 0);
            for (int s = 0; s <= 4; ++s) {
                PaBound b = pa_average_distance(ens, s, HashFamily::make(4, s));
                w.feed(b.lhs, b.rhs);
            }
        }
        record("renner-koenig-pa", w, 1e-9);
    }
    {
        Worst w;
        for (int t = 0; t < 50; ++t) {
            auto rng = make_rng(seed, "vb-channel-unc", std::uint64_t(t));
            Eigen::Index d = (t % 2 == 0) ? 2 : 4;
            QuantumChannel ch = QuantumChannel::random(d, d, 1 + Eigen::Index(rng() % (d * d)), rng);
            Ensemble e0 = Ensemble::orthogonal(d);
            Mat f = (d == 2) ? hadamard() : fourier_matrix(d);
            std::vector<Mat> rot;
            for (Eigen::Index i = 0; i < d; ++i) rot.push_back(Mat(f.col(i) * f.col(i).adjoint()));
            double lhs = holevo_chi(apply_channel(ch, e0)) + holevo_chi(apply_channel(ch, Ensemble::uniform(std::move(rot))));
            w.feed(lhs, channel_mutual_info(ch, d));
        }
        record("channel-uncertainty", w, 1e-7);
    }
    {
        Worst w;
        for (int t = 0; t < 25; ++t) {
            auto rng = make_rng(seed, "vb-fannes", std::uint64_t(t));
            Eigen::Index d = 2 + Eigen::Index(rng() % 3);
            Ensemble pure = random_ensemble(4, d, rng, true);
            std::uniform_real_distribution<double> u(0.0, 0.3);
            Ensemble mixed = apply_channel(QuantumChannel::depolarizing(d, u(rng)), pure);
            double eps = 0.0;
            for (Eigen::Index i = 0; i < pure.size(); ++i)
                eps += pure.priors(i) * (1.0 - (pure.states[i] * mixed.states[i]).trace().real());
            w.feed(std::abs(holevo_chi(mixed) - holevo_chi(pure)), fannes_ensemble_bound(std::max(eps, 0.0), d));
        }
        record("holevo-relation-fannes", w, 1e-9);
    }
    {
        Worst w;
        for (CheatKind kind : {CheatKind::PartialMeasure, CheatKind::ControlledRotation, CheatKind::CopyFraction})
            for (Eigen::Index d : {Eigen::Index(2), Eigen::Index(4)}) {
                Mat u = (d == 2) ? hadamard() : fourier_matrix(d);
                for (int i = 0; i < 9; ++i) {
                    CheatRunResult r = run_cheat_scenario(bob_cheat_family(kind, (M_PI / 2.0) * i / 8.0, d, u));
                    w.feed(r.chi_C, r.bound);
                }
            }
        record("cheat-sensitive", w, 1e-7);
    }
    {
        Worst w;
        for (int t = 0; t < 25; ++t) {
            auto rng = make_rng(seed, "vb-binding", std::uint64_t(t));
            int n = 1 + int(rng() % 3);
            int k = 1 << (rng() % 3);
            ProtocolInstance inst(n, k == 1 ? UnitarySet{{Mat::Identity(1 << n, 1 << n)}, "identity"}
                                            : haar_set(Eigen::Index(1) << n, k, rng()));
            DensityMatrix rho(random_density_matrix(Eigen::Index(1) << n, rng), {Eigen::Index(1) << n});
            BindingAudit audit = binding_audit(inst, rho);
            // equality both ways: |sum - |U|| must vanish
            w.feed(std::abs(audit.upper_bound - double(inst.basis_count())), 0.0);
        }
        record("alice-lemma-binding", w, 1e-9);
    }
    {
        Worst w;
        for (int t = 0; t < 50; ++t) {
            auto rng = make_rng(seed, "vb-fvdg", std::uint64_t(t));
            Eigen::Index d = 2 + Eigen::Index(rng() % 5);
            Mat a = random_density_matrix(d, rng), b = random_density_matrix(d, rng);
            double f = fidelity(a, b), dd = trace_distance(a, b);
            w.feed(1.0 - f, dd);
            w.feed(dd, std::sqrt(std::max(0.0, 1.0 - f * f)));
        }
        record("fuchs-van-de-graaf", w, 1e-9);
    }

    emit_report(rep, opt.out_path);
    for (const CheckRecord& r : rep.records)
        log_info(r.name + (r.pass ? " pass" : " FAIL") + " slack=" + fmt12(r.slack));
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LOCKCOM quantum bit-string commitment simulator and bound verifier"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, csv_path, perturb;
    std::uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "root seed; per-task streams derive from it");
    app.add_option("--out", out_path, "report output path (stdout when absent)");
    app.add_option("--csv", csv_path, "CSV output path for sweep/locking data");
    app.add_option("--jobs", jobs, "worker threads for sweeps");

    auto* run = app.add_subcommand("run-protocol", "honest commit/reveal over all (x, r)");
    auto* attack = app.add_subcommand("attack", "Alice's hashing attack");
    auto* sweep = app.add_subcommand("sweep-cheat", "Bob cheat-family sweep");
    auto* locking = app.add_subcommand("locking", "Haar-random-basis locking experiment");
    auto* verify = app.add_subcommand("verify-bounds", "run the full inequality suite");

    int n = -1, d_flag = -1, k_bases = -1, theta_points = -1, seeds_flag = -1;
    double b_claimed = std::nan(""), gamma = std::nan("");
    std::string unitaries_flag, kind_flag;
    for (CLI::App* sub : {run, attack, sweep, locking, verify}) {
        sub->add_option("--n", n, "string length");
        sub->add_option("--d", d_flag, "dimension");
    }
    run->add_option("--unitaries", unitaries_flag, "identity-hadamard | fourier-pair | haar");
    attack->add_option("--unitaries", unitaries_flag, "identity-hadamard | fourier-pair | haar");
    run->add_option("--k-bases", k_bases, "bases for haar sets");
    attack->add_option("--b", b_claimed, "claimed concealment level");
    attack->add_option("--gamma", gamma, "truncation margin; default 4(log2 5 - 1)");
    sweep->add_option("--kind", kind_flag, "partial-measure | controlled-rotation | copy-fraction");
    sweep->add_option("--theta-points", theta_points, "grid size over [0, pi/2]");
    locking->add_option("--seeds", seeds_flag, "seeds per k");
    locking->add_option("--k-bases", k_bases, "single k (overrides k_list)");
    verify->add_option("--perturb", perturb, "test hook: force the named record to fail")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Options opt;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            opt.cfg = json::parse(in);
        }
        // command line wins over the config document
        if (seed != 0 || !opt.cfg.contains("seed")) opt.cfg["seed"] = seed;
        opt.seed = opt.cfg["seed"].get<std::uint64_t>();
        opt.out_path = !out_path.empty() ? out_path : opt.cfg.value("output_path", "");
        opt.csv_path = !csv_path.empty() ? csv_path : opt.cfg.value("csv_path", "");
        opt.jobs = jobs;
        if (n >= 0) opt.cfg["n"] = n;
        if (d_flag >= 0) opt.cfg["d"] = d_flag;
        if (k_bases >= 0) opt.cfg["k_bases"] = k_bases;
        if (theta_points >= 0) opt.cfg["theta_points"] = theta_points;
        if (seeds_flag >= 0) opt.cfg["seeds"] = seeds_flag;
        if (!std::isnan(b_claimed)) opt.cfg["b_claimed"] = b_claimed;
        if (!std::isnan(gamma)) opt.cfg["gamma"] = gamma;
        if (!unitaries_flag.empty()) opt.cfg["unitaries"] = unitaries_flag;
        if (!kind_flag.empty()) opt.cfg["kind"] = kind_flag;
        if (locking->parsed() && k_bases >= 0) opt.cfg["k_list"] = json::array({k_bases});

        auto start = std::chrono::steady_clock::now();
        int rc = 2;
        if (run->parsed()) rc = cmd_run_protocol(opt);
        if (attack->parsed()) rc = cmd_attack(opt);
        if (sweep->parsed()) rc = cmd_sweep_cheat(opt);
        if (locking->parsed()) rc = cmd_locking(opt);
        if (verify->parsed()) rc = cmd_verify_bounds(opt, perturb);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        log_info("wall time " + std::to_string(ms.count()) + " ms");
        return rc;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "qbsc: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "qbsc: bad config: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qbsc: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qbsc: " << e.what() << "\n";
        return 1;
    }
}
