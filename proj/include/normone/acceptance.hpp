#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "normone/config.hpp"
#include "normone/hilbert90.hpp"
#include "normone/lseries.hpp"
#include "normone/report_io.hpp"
#include "normone/torus.hpp"

namespace normone {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::string artifacts_dir = "acceptance_artifacts";
    int workers = 1;
};

namespace acceptance_detail {

inline bool same_classes(const EnumerationReport& a, const EnumerationReport& b,
                         std::string& why) {
    if (a.count() != b.count()) {
        std::ostringstream os;
        os << "count " << a.count() << " vs " << b.count();
        why = os.str();
        return false;
    }
    for (std::size_t i = 0; i < a.count(); ++i) {
        if (a.classes[i].h != b.classes[i].h || a.classes[i].alpha != b.classes[i].alpha) {
            std::ostringstream os;
            os << "class " << i << " differs";
            why = os.str();
            return false;
        }
    }
    return true;
}

inline EnumerationReport filter_below(const EnumerationReport& rep, double r) {
    EnumerationReport out = rep;
    out.r = r;
    out.classes.clear();
    for (const auto& vc : rep.classes)
        if (static_cast<double>(vc.h) < r) out.classes.push_back(vc);
    return out;
}

}  // namespace acceptance_detail

// Runs the full acceptance suite, printing one pass/fail line per criterion.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                                   std::ostream& log) {
    namespace ad = acceptance_detail;
    std::vector<CriterionResult> results;
    auto run = [&](int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        CriterionResult res;
        res.id = id;
        res.name = name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto [ok, detail] = body();
            res.pass = ok;
            res.detail = detail;
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << (res.pass ? "PASS" : "FAIL") << "  C" << res.id << "  " << res.name << "  ["
            << res.detail << "]  (" << res.seconds << " s)" << std::endl;
        results.push_back(res);
        return res.pass;
    };

    FieldPtr f2 = make_real_quadratic(2, 192);
    UnitSystem us2 = UnitSystem::real_quadratic(f2);
    FieldPtr f3 = make_real_quadratic(3, 192);
    UnitSystem us3 = UnitSystem::real_quadratic(f3);
    FieldConfig cubic_cfg = parse_field_config(builtin_cubic13_json());
    FieldPtr fc = load_field(cubic_cfg, 192);
    UnitSystem usc = make_unit_system(fc, cubic_cfg);

    // 1: exact oracle equivalence for all r <= 500 on sqrt2 and sqrt3
    run(1, "oracle equivalence r<=500, Q(sqrt2) and Q(sqrt3)", [&]() -> std::pair<bool, std::string> {
        std::size_t runs = 0;
        for (const UnitSystem* us : {&us2, &us3}) {
            EnumerationReport oracle = brute_force_oracle(*us, 50, 500.0);
            std::vector<double> rs = {1.5, 2.5};
            for (int r = 2; r <= 500; ++r) rs.push_back(static_cast<double>(r));
            for (double r : rs) {
                EnumerationReport fast = enumerate_visible(*us, r);
                EnumerationReport expect = ad::filter_below(oracle, r);
                std::string why;
                if (!ad::same_classes(fast, expect, why)) {
                    std::ostringstream os;
                    os << us->field()->label() << " r=" << r << ": " << why;
                    return {false, os.str()};
                }
                ++runs;
            }
        }
        std::ostringstream os;
        os << runs << " bounds checked, all class sets identical";
        return {true, os.str()};
    });

    // 2: exact decomposition and pi-factorization identities on coordinate boxes
    run(2, "visible decomposition and pi identities, exact", [&]() -> std::pair<bool, std::string> {
        long checked = 0;
        for (const FieldPtr& f : {f2, fc}) {
            int d = f->degree();
            std::vector<long> x(static_cast<std::size_t>(d), -20);
            while (true) {
                bool nonzero = false;
                for (long xi : x)
                    if (xi) nonzero = true;
                if (nonzero) {
                    Element g = make_element_int(f, x);
                    auto dec = visible_decompose(g);
                    if (!(dec.alpha.scaled(mpq_class(dec.n)) == g)) return {false, "n*alpha != g"};
                    if (!is_primitive(dec.alpha)) return {false, "alpha not primitive"};
                    if (!(pi_map(g) == pi_map(dec.alpha))) return {false, "pi(g) != pi(alpha)"};
                    mpz_class npow;
                    mpz_pow_ui(npow.get_mpz_t(), dec.n.get_mpz_t(), static_cast<unsigned long>(d));
                    if (abs(g.norm()) != npow * abs(dec.alpha.norm()))
                        return {false, "|N(n alpha)| != n^d |N(alpha)|"};
                    ++checked;
                }
                int i = 0;
                while (i < d && x[static_cast<std::size_t>(i)] == 20) {
                    x[static_cast<std::size_t>(i)] = -20;
                    ++i;
                }
                if (i == d) break;
                ++x[static_cast<std::size_t>(i)];
            }
        }
        std::ostringstream os;
        os << checked << " integral elements, 0 failures";
        return {true, os.str()};
    });

    // 3: unit invariance of torus points through pi, 1000 randomized trials
    run(3, "torus point unit invariance, 1000 trials at 192 bits", [&]() -> std::pair<bool, std::string> {
        double worst = 0.0;
        int trial = 0;
        for (const UnitSystem* usp : {&us2, &usc}) {
            const UnitSystem& us = *usp;
            std::mt19937_64 rng(2024 + us.rank());
            std::uniform_int_distribution<long> coord(-9, 9);
            std::uniform_int_distribution<long> kd(-3, 3);
            for (int i = 0; i < 500; ++i, ++trial) {
                std::vector<long> c(static_cast<std::size_t>(us.field()->degree()));
                bool nz = false;
                for (auto& xi : c) {
                    xi = coord(rng);
                    if (xi) nz = true;
                }
                if (!nz) c[0] = 1;
                Element a = make_element_int(us.field(), c);
                Element u = field_one(us.field());
                for (int j = 0; j < us.rank(); ++j) u = u * us.unit_power(j, kd(rng));
                if (kd(rng) > 0) u = -u;
                TorusPoint ta = us.torus_coordinates(pi_map(a));
                TorusPoint tb = us.torus_coordinates(pi_map(u * a));
                double dist = torus_distance(ta.t, tb.t);
                worst = std::max(worst, dist);
                if (dist > 1e-9) {
                    std::ostringstream os;
                    os << "trial " << trial << " distance " << dist;
                    return {false, os.str()};
                }
            }
        }
        std::ostringstream os;
        os << "worst wrap-aware distance " << worst;
        return {true, os.str()};
    });

    // shared sqrt2 runs for criteria 4-7 and 10, built inside criterion 4 so
    // the enumeration cost is attributed where it is first needed
    EnumerateOptions eopts;
    eopts.workers = opts.workers;
    eopts.max_box_volume = 4e9;
    EnumerationReport rep3, rep4, rep5;
    ResiduePrediction pred2 = residue_prediction(us2);

    // 4: counting constant against the residue prediction
    run(4, "counting: Q(sqrt2) count/r vs residue prediction at r=1e5", [&]() -> std::pair<bool, std::string> {
        rep3 = enumerate_visible(us2, 1e3, eopts);
        rep4 = enumerate_visible(us2, 1e4, eopts);
        rep5 = enumerate_visible(us2, 1e5, eopts);
        double ratio = static_cast<double>(rep5.count()) / rep5.r;
        double rel = std::fabs(ratio - pred2.c) / pred2.c;
        std::ostringstream os;
        os << "count=" << rep5.count() << " count/r=" << ratio << " C=" << pred2.c << " rel err "
           << rel * 100 << "%";
        return {rel <= 0.03, os.str()};
    });

    // 5: Weyl decay for k in {1,2,3,-1}
    run(5, "Weyl sums decay, Q(sqrt2), k in {1,2,3,-1}", [&]() -> std::pair<bool, std::string> {
        std::ostringstream os;
        bool ok = true;
        for (long k : {1L, 2L, 3L, -1L}) {
            double n3 = weyl_sum(rep3, {{k}}).normalized;
            double n4 = weyl_sum(rep4, {{k}}).normalized;
            double n5 = weyl_sum(rep5, {{k}}).normalized;
            bool final_ok = n5 < 0.02;
            bool mono_ok = n4 <= 2.0 * n3 && n5 <= 2.0 * n4;
            ok = ok && final_ok && mono_ok;
            os << "k=" << k << ": " << n3 << " -> " << n4 << " -> " << n5 << "; ";
        }
        return {ok, os.str()};
    });

    // 6: exact 1-d star discrepancy decay
    run(6, "star discrepancy decay, Q(sqrt2)", [&]() -> std::pair<bool, std::string> {
        double d3 = star_discrepancy(rep3).value;
        double d4 = star_discrepancy(rep4).value;
        double d5 = star_discrepancy(rep5).value;
        std::ostringstream os;
        os << d3 << " -> " << d4 << " -> " << d5;
        return {d4 < d3 && d5 < d4 && d5 < 0.02, os.str()};
    });

    // 7: the L-series rewriting identity at s=2, X=1e4
    run(7, "L identity: Xi1 = zeta(4) L at s=2, X=1e4, k in {0,1}", [&]() -> std::pair<bool, std::string> {
        std::ostringstream os;
        bool ok = true;
        for (long k : {0L, 1L}) {
            IdentityCheck ic = identity_check(us2, rep5, {{k}}, 2.0, 1e4);
            ok = ok && ic.residual_one <= 1e-3 && ic.matches == 1;
            os << "k=" << k << ": |ratio-1|=" << ic.residual_one << " matches zeta(ds)*" << ic.matches
               << "; ";
        }
        os << "normalization zeta(ds) (not 2 zeta(ds))";
        return {ok, os.str()};
    });

    // 8: cyclic cubic Weyl decay on the 2-torus
    run(8, "cubic-13 Weyl sums at r=1e4, k in {(1,0),(0,1),(1,1)}", [&]() -> std::pair<bool, std::string> {
        EnumerationReport repc = enumerate_visible(usc, 1e4, eopts);
        bool flagged = false;
        for (const auto& s : repc.assumptions)
            if (s.find("fundamentality") != std::string::npos) flagged = true;
        std::ostringstream os;
        bool ok = flagged;
        if (!flagged) os << "fundamentality flag missing; ";
        os << "count=" << repc.count() << "; ";
        for (const auto& k : std::vector<std::vector<long>>{{1, 0}, {0, 1}, {1, 1}}) {
            double n = weyl_sum(repc, {k}).normalized;
            ok = ok && n < 0.05;
            os << "k=(" << k[0] << "," << k[1] << "): " << n << "; ";
        }
        return {ok, os.str()};
    });

    // 9: the collision group documenting that h need not separate torus points
    run(9, "collision probe: Q(sqrt2) r=3, tol 1e-8", [&]() -> std::pair<bool, std::string> {
        EnumerationReport r3 = enumerate_visible(us2, 3.0);
        auto groups = collision_scan(r3, 1e-8);
        if (groups.size() != 1) return {false, "expected exactly one group"};
        const auto& g = groups[0];
        if (g.classes.size() != 2) return {false, "expected a group of two classes"};
        long long h0 = r3.classes[g.classes[0]].h, h1 = r3.classes[g.classes[1]].h;
        double t0 = r3.classes[g.classes[0]].t[0], t1 = r3.classes[g.classes[1]].t[0];
        bool ok = ((h0 == 1 && h1 == 2) || (h0 == 2 && h1 == 1)) && t0 == 0.0 && t1 == 0.0;
        std::ostringstream os;
        os << "group {h=" << h0 << ", h=" << h1 << "} at t=(0)";
        return {ok, os.str()};
    });

    // 10: byte-identical CSV across worker counts
    run(10, "determinism: r=1e5 CSV identical for workers 1 and 4", [&]() -> std::pair<bool, std::string> {
        std::filesystem::create_directories(opts.artifacts_dir);
        EnumerateOptions w1 = eopts, w4 = eopts;
        w1.workers = 1;
        w4.workers = 4;
        EnumerationReport a = enumerate_visible(us2, 1e5, w1);
        EnumerationReport b = enumerate_visible(us2, 1e5, w4);
        std::ostringstream sa, sb;
        write_enumeration_csv(a, sa);
        write_enumeration_csv(b, sb);
        std::string pa = opts.artifacts_dir + "/enum_1e5_workers1.csv";
        std::string pb = opts.artifacts_dir + "/enum_1e5_workers4.csv";
        std::ofstream(pa, std::ios::binary) << sa.str();
        std::ofstream(pb, std::ios::binary) << sb.str();
        bool ok = sa.str() == sb.str();
        std::ostringstream os;
        os << "csv bytes " << sa.str().size() << (ok ? " identical" : " DIFFER") << "; artifacts in "
           << opts.artifacts_dir;
        return {ok, os.str()};
    });

    return results;
}

}  // namespace normone
