#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "normone/bigfloat.hpp"
#include "normone/errors.hpp"

namespace normone {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;
using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;

inline QMat q_identity(std::size_t n) {
    QMat m(n, QVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline ZMat z_identity(std::size_t n) {
    ZMat m(n, ZVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline ZMat z_mat_mul(const ZMat& a, const ZMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b[0].size();
    ZMat r(n, ZVec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (a[i][j] != 0)
                for (std::size_t l = 0; l < m; ++l) r[i][l] += a[i][j] * b[j][l];
    return r;
}

inline bool z_mat_is_identity(const ZMat& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

// Exact determinant by fraction-free (Bareiss) elimination. Destroys its copy.
inline mpz_class z_det(ZMat m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    mpz_class sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline mpq_class q_det(QMat m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    mpq_class det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(m[k], m[p]);
            det = -det;
        }
        det *= m[k][k];
        mpq_class inv = 1 / m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            mpq_class f = m[i][k] * inv;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

// Solve A x = b exactly. Throws ConfigError on a singular system.
inline QVec q_solve(QMat a, QVec b) {
    std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) throw ConfigError("singular linear system");
        if (p != k) {
            std::swap(a[k], a[p]);
            std::swap(b[k], b[p]);
        }
        mpq_class inv = 1 / a[k][k];
        for (std::size_t j = k; j < n; ++j) a[k][j] *= inv;
        b[k] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            mpq_class f = a[i][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    return b;
}

inline QMat q_inverse(const QMat& a) {
    std::size_t n = a.size();
    QMat inv(n, QVec(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        QVec e(n, 0);
        e[j] = 1;
        QVec col = q_solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

// gcd of the numerators of an all-integer vector; 0 for the zero vector.
inline mpz_class z_content(const ZVec& v) {
    mpz_class g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return abs(g);
}

// ---- BigFloat dense matrices (tiny dimensions only) ----

using RVec = std::vector<BigFloat>;
using RMat = std::vector<RVec>;

inline RVec r_solve(RMat a, RVec b) {
    std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (abs(a[i][k]) > abs(a[p][k])) p = i;
        if (a[p][k].is_zero()) throw ConfigError("singular real system");
        if (p != k) {
            std::swap(a[k], a[p]);
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            BigFloat f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    RVec x(n, BigFloat(b.empty() ? 64 : b[0].prec()));
    for (std::size_t i = n; i-- > 0;) {
        BigFloat s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

inline BigFloat r_det(RMat a) {
    std::size_t n = a.size();
    if (n == 0) return BigFloat::of(1L, 64);
    BigFloat det = BigFloat::of(1L, a[0][0].prec());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (abs(a[i][k]) > abs(a[p][k])) p = i;
        if (a[p][k].is_zero()) return BigFloat::of(0L, det.prec());
        if (p != k) {
            std::swap(a[k], a[p]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            BigFloat f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

inline RMat r_inverse(const RMat& a, mpfr_prec_t prec) {
    std::size_t n = a.size();
    RMat inv(n, RVec(n, BigFloat(prec)));
    for (std::size_t j = 0; j < n; ++j) {
        RVec e(n, BigFloat(prec));
        e[j] = BigFloat::of(1L, prec);
        RVec col = r_solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

}  // namespace normone
