#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "normone/bigfloat.hpp"
#include "normone/errors.hpp"

namespace normone {

// Coefficients are ascending: p[0] + p[1] x + ... + p[d] x^d.

inline BigFloat poly_eval(const std::vector<mpz_class>& p, const BigFloat& x) {
    mpfr_prec_t prec = x.prec();
    BigFloat acc(prec);
    for (std::size_t i = p.size(); i-- > 0;) {
        acc *= x;
        acc += BigFloat::of(p[i], prec);
    }
    return acc;
}

inline BigComplex poly_eval(const std::vector<mpz_class>& p, const BigComplex& x) {
    mpfr_prec_t prec = x.re.prec();
    BigComplex acc(prec);
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * x;
        acc.re += BigFloat::of(p[i], prec);
    }
    return acc;
}

inline std::vector<mpz_class> poly_derivative(const std::vector<mpz_class>& p) {
    std::vector<mpz_class> d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    if (d.empty()) d.push_back(0);
    return d;
}

// Durand-Kerner in double precision; adequate seeds for the Newton polish at
// the degrees this project sees.
inline std::vector<std::complex<double>> initial_roots(const std::vector<mpz_class>& p) {
    int d = static_cast<int>(p.size()) - 1;
    std::vector<std::complex<double>> c(d + 1);
    double lead = p[d].get_d();
    for (int i = 0; i <= d; ++i) c[i] = p[i].get_d() / lead;
    std::vector<std::complex<double>> z(d);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> w(1.0, 0.0);
    for (int i = 0; i < d; ++i) {
        z[i] = w;
        w *= seed;
    }
    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = 0;
        for (int i = d; i >= 0; --i) acc = acc * x + c[i];
        return acc;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> den = 1;
            for (int j = 0; j < d; ++j)
                if (j != i) den *= (z[i] - z[j]);
            std::complex<double> delta = eval(z[i]) / den;
            z[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

inline BigFloat refine_real_root(const std::vector<mpz_class>& p, double seed, mpfr_prec_t prec) {
    std::vector<mpz_class> dp = poly_derivative(p);
    BigFloat x = BigFloat::of(seed, prec);
    for (int i = 0; i < 200; ++i) {
        BigFloat f = poly_eval(p, x);
        if (f.is_zero()) break;
        BigFloat fp = poly_eval(dp, x);
        if (fp.is_zero()) throw ConfigError("Newton refinement hit a critical point");
        BigFloat step = f / fp;
        x -= step;
        if (mpfr_get_exp(abs(step).raw()) < mpfr_get_exp(abs(x).raw()) - static_cast<long>(prec) + 8) break;
    }
    return x;
}

inline BigComplex refine_complex_root(const std::vector<mpz_class>& p, std::complex<double> seed,
                                      mpfr_prec_t prec) {
    std::vector<mpz_class> dp = poly_derivative(p);
    BigComplex x(BigFloat::of(seed.real(), prec), BigFloat::of(seed.imag(), prec));
    for (int i = 0; i < 200; ++i) {
        BigComplex f = poly_eval(p, x);
        if (f.abs2().is_zero()) break;
        BigComplex fp = poly_eval(dp, x);
        if (fp.abs2().is_zero()) throw ConfigError("Newton refinement hit a critical point");
        BigComplex step = f / fp;
        x = x - step;
        BigFloat ssz = step.abs2(), xsz = x.abs2();
        if (ssz.is_zero()) break;
        if (mpfr_get_exp(ssz.raw()) < mpfr_get_exp(xsz.raw()) - 2 * static_cast<long>(prec) + 16) break;
    }
    return x;
}

}  // namespace normone
