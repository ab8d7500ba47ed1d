#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "normone/hilbert90.hpp"
#include "normone/lseries.hpp"
#include "normone/torus.hpp"

namespace normone {

inline std::string fmt_g(double x, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// CSV: h, coord_1..coord_d, t_1..t_rank, err
inline void write_enumeration_csv(const EnumerationReport& rep, std::ostream& os) {
    os << "h";
    for (int i = 1; i <= rep.degree; ++i) os << ",coord_" << i;
    for (int i = 1; i <= rep.torus_rank; ++i) os << ",t_" << i;
    os << ",err\n";
    for (const auto& vc : rep.classes) {
        os << vc.h;
        for (const auto& c : vc.alpha) os << ',' << c.get_str();
        for (double t : vc.t) os << ',' << fmt_g(t);
        os << ',' << fmt_g(vc.err, 3) << '\n';
    }
}

inline nlohmann::json enumeration_to_json(const EnumerationReport& rep) {
    nlohmann::json j;
    j["field"] = rep.field_label;
    j["r"] = rep.r;
    j["count"] = rep.count();
    j["degree"] = rep.degree;
    j["torus_rank"] = rep.torus_rank;
    j["wall_seconds"] = rep.wall_seconds;
    j["precision_escalations"] = rep.precision_escalations;
    j["assumptions"] = rep.assumptions;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& vc : rep.classes) {
        nlohmann::json c;
        c["h"] = vc.h;
        std::vector<std::string> alpha;
        for (const auto& x : vc.alpha) alpha.push_back(x.get_str());
        c["alpha"] = alpha;
        c["t"] = vc.t;
        c["err"] = vc.err;
        classes.push_back(std::move(c));
    }
    j["classes"] = std::move(classes);
    return j;
}

// CSV: r, k_1..k_m, re_S, im_S, norm_mag, count
inline void write_weyl_csv(const std::vector<WeylReport>& rows, int rank, std::ostream& os) {
    os << "r";
    for (int i = 1; i <= rank; ++i) os << ",k_" << i;
    os << ",re_S,im_S,norm_mag,count\n";
    for (const auto& w : rows) {
        os << fmt_g(w.r);
        for (long k : w.k) os << ',' << k;
        os << ',' << fmt_g(w.S.real()) << ',' << fmt_g(w.S.imag()) << ',' << fmt_g(w.normalized) << ','
           << w.count << '\n';
    }
}

inline nlohmann::json weyl_to_json(const WeylReport& w) {
    nlohmann::json j;
    j["r"] = w.r;
    j["k"] = w.k;
    j["re_S"] = w.S.real();
    j["im_S"] = w.S.imag();
    j["norm_mag"] = w.normalized;
    j["count"] = w.count;
    j["err"] = w.err;
    return j;
}

// CSV: r, dim, grid, dstar, exact
inline void write_discrepancy_csv(const std::vector<std::pair<double, StarDiscrepancy>>& rows,
                                  std::ostream& os) {
    os << "r,dim,grid,dstar,exact\n";
    for (const auto& [r, d] : rows)
        os << fmt_g(r) << ',' << d.dim << ',' << d.grid << ',' << fmt_g(d.value) << ','
           << (d.exact ? 1 : 0) << '\n';
}

// CSV: k_1..k_m, s, X, re_value, im_value, tail, ratio  (value = truncated L)
inline void write_lcheck_csv(const std::vector<std::pair<Character, IdentityCheck>>& rows, int rank,
                             std::ostream& os) {
    for (int i = 1; i <= rank; ++i) os << "k_" << i << ',';
    os << "s,X,re_value,im_value,tail,ratio\n";
    for (const auto& [chi, ic] : rows) {
        for (long k : chi.k) os << k << ',';
        os << fmt_g(ic.l.s) << ',' << fmt_g(ic.l.cutoff) << ',' << fmt_g(ic.l.value.real()) << ','
           << fmt_g(ic.l.value.imag()) << ',' << fmt_g(ic.l.tail, 6) << ',' << fmt_g(ic.ratio) << '\n';
    }
}

inline nlohmann::json identity_to_json(const Character& chi, const IdentityCheck& ic) {
    nlohmann::json j;
    j["k"] = chi.k;
    j["s"] = ic.l.s;
    j["X"] = ic.l.cutoff;
    j["L"] = {{"re", ic.l.value.real()}, {"im", ic.l.value.imag()}, {"tail", ic.l.tail}};
    j["Xi1"] = {{"re", ic.xi1.value.real()}, {"im", ic.xi1.value.imag()}, {"tail", ic.xi1.tail}};
    j["zeta_ds"] = ic.zeta_ds;
    j["ratio"] = ic.ratio;
    j["residual_one"] = ic.residual_one;
    j["residual_two"] = ic.residual_two;
    j["matches_normalization"] = ic.matches;
    j["insufficient_cutoff"] = ic.insufficient_cutoff;
    return j;
}

}  // namespace normone
