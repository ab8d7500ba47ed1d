#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "normone/bigfloat.hpp"
#include "normone/errors.hpp"
#include "normone/hilbert90.hpp"
#include "normone/torus.hpp"
#include "normone/units.hpp"

namespace normone {

struct ZetaValue {
    double value = 0.0;
    double err = 0.0;
};

inline ZetaValue riemann_zeta(double s) {
    if (!(s > 1.0)) throw ConfigError("zeta requires s > 1");
    BigFloat sb = BigFloat::of(s, 192);
    double v = zeta(sb).to_double();
    return {v, 1e-15 * std::fabs(v) + 1e-300};
}

// Residue-based prediction of the counting constant: #classes(r) ~ C * r with
// C = 2^r1 (2 pi)^r2 Reg / (w sqrt|disc| zeta(d)). Conditional on the class
// number hint and on the supplied units being fundamental.
struct ResiduePrediction {
    double kappa = 0.0;  // 2^r1 (2 pi)^r2 h Reg / (w sqrt|disc|)
    double c = 0.0;      // kappa / (h zeta(d))
    std::vector<std::string> assumptions;
};

inline ResiduePrediction residue_prediction(const UnitSystem& us) {
    const FieldPtr& f = us.field();
    double reg = us.regulator().to_double();
    if (!(reg > 0)) throw ConfigError("missing regulator");
    double h = us.class_number_hint().get_d();
    double disc = std::fabs(f->discriminant().get_d());
    ResiduePrediction out;
    out.kappa = std::pow(2.0, f->r1()) * std::pow(2.0 * M_PI, f->r2()) * h * reg /
                (us.roots_of_unity() * std::sqrt(disc));
    out.c = out.kappa / (h * riemann_zeta(static_cast<double>(f->degree())).value);
    out.assumptions = us.assumptions();
    return out;
}

struct TruncatedSeries {
    double s = 0.0;
    double cutoff = 0.0;
    std::complex<double> value{0.0, 0.0};
    double tail = 0.0;  // heuristic bound from fitted linear count growth
};

// L(chi; s) truncated at height X: sum over visible classes with h <= X of
// chi(t)/h^s. The report must cover heights up to X.
inline TruncatedSeries l_truncated(const UnitSystem& us, const EnumerationReport& rep,
                                   const Character& chi, double s, double X) {
    if (!(s > 1.0)) throw ConfigError("l_truncated requires s > 1");
    if (X >= 1.0 && rep.r < X + 1.0)
        throw ConfigError("enumeration report does not cover the cutoff");
    TruncatedSeries out;
    out.s = s;
    out.cutoff = X;
    for (const auto& vc : rep.classes) {
        if (static_cast<double>(vc.h) > X) break;  // classes sorted by h
        out.value += character_eval(chi, vc.t) / std::pow(static_cast<double>(vc.h), s);
    }
    double c_hat = residue_prediction(us).c;
    out.tail = c_hat * std::pow(std::max(X, 1.0), 1.0 - s) * s / (s - 1.0);
    return out;
}

// Xi_1(chi-hat; s) truncated at ideal norm X: sum over pairs (n, class) with
// n^d * h <= X of chi(t)/(n^d h)^s, i.e. over principal ideals counted once.
inline TruncatedSeries xi1_truncated(const UnitSystem& us, const EnumerationReport& rep,
                                     const Character& chi, double s, double X) {
    if (!(s > 1.0)) throw ConfigError("xi1_truncated requires s > 1");
    if (X >= 1.0 && rep.r < X + 1.0)
        throw ConfigError("enumeration report does not cover the cutoff");
    int d = rep.degree;
    TruncatedSeries out;
    out.s = s;
    out.cutoff = X;
    for (const auto& vc : rep.classes) {
        double h = static_cast<double>(vc.h);
        if (h > X) break;
        std::complex<double> chi_t = character_eval(chi, vc.t);
        for (long n = 1;; ++n) {
            double nd = std::pow(static_cast<double>(n), d);
            double norm = nd * h;
            if (norm > X) break;
            out.value += chi_t / std::pow(norm, s);
        }
    }
    double c_hat = residue_prediction(us).c;
    out.tail = riemann_zeta(static_cast<double>(d) * s).value * c_hat *
               std::pow(std::max(X, 1.0), 1.0 - s) * s / (s - 1.0);
    return out;
}

// Measures the rewriting identity Xi_1 = zeta(d s) * L against the variant
// with an extra factor 2; reports which normalization the data approaches.
struct IdentityCheck {
    double ratio = 0.0;          // |Xi_1 / (zeta(ds) * L)|
    double residual_one = 0.0;   // |ratio complex - 1|
    double residual_two = 0.0;   // |ratio complex - 2|
    int matches = 1;             // 1 or 2, whichever residual is smaller
    bool insufficient_cutoff = false;
    TruncatedSeries l;
    TruncatedSeries xi1;
    double zeta_ds = 0.0;
};

inline IdentityCheck identity_check(const UnitSystem& us, const EnumerationReport& rep,
                                    const Character& chi, double s, double X) {
    if (!(s > 1.0)) throw ConfigError("identity_check requires s > 1");
    IdentityCheck out;
    out.l = l_truncated(us, rep, chi, s, X);
    out.xi1 = xi1_truncated(us, rep, chi, s, X);
    out.zeta_ds = riemann_zeta(static_cast<double>(rep.degree) * s).value;
    if (std::abs(out.l.value) < 1e-12) throw ConfigError("truncated L-value too small to form the ratio");
    std::complex<double> q = out.xi1.value / (out.zeta_ds * out.l.value);
    out.ratio = std::abs(q);
    out.residual_one = std::abs(q - std::complex<double>(1.0, 0.0));
    out.residual_two = std::abs(q - std::complex<double>(2.0, 0.0));
    out.matches = out.residual_one <= out.residual_two ? 1 : 2;
    out.insufficient_cutoff = X < 1000.0;
    return out;
}

}  // namespace normone
