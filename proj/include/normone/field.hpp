#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "normone/bigfloat.hpp"
#include "normone/errors.hpp"
#include "normone/linalg.hpp"
#include "normone/polynomial.hpp"

namespace normone {

// One representative archimedean place: a refined root of the minimal
// polynomial (real roots first, one root per complex-conjugate pair).
struct Place {
    bool is_real = true;
    BigComplex root;
};

struct EmbedResult {
    std::vector<BigComplex> values;  // one per place; imaginary part 0 at real places
    double err;                      // uniform absolute error bound
};

// Raw, not-yet-validated description of a field. Builders fill this and
// make_field_spec turns it into a checked FieldSpec.
struct FieldData {
    int degree = 0;
    std::vector<mpz_class> min_poly;  // ascending coefficients, monic
    QMat integral_basis;              // row i = theta-power coefficients of omega_i
    ZMat sigma;                       // row i = integral-basis coordinates of sigma(omega_i)
    int r1 = 0, r2 = 0;
    mpz_class discriminant = 0;  // 0 = not supplied, computed from the trace form
    std::string label;
};

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

class Element;

class FieldSpec {
public:
    int degree() const { return degree_; }
    int r1() const { return r1_; }
    int r2() const { return r2_; }
    int num_places() const { return r1_ + r2_; }
    int torus_rank() const { return r1_ + r2_ - 1; }
    bool totally_real() const { return r2_ == 0; }
    const mpz_class& discriminant() const { return disc_; }
    const std::vector<mpz_class>& min_poly() const { return min_poly_; }
    const QMat& integral_basis() const { return basis_; }
    const ZMat& sigma_matrix() const { return sigma_; }
    const std::vector<ZMat>& sigma_powers() const { return sigma_pow_; }
    const std::vector<Place>& places() const { return places_; }
    const std::vector<std::vector<BigComplex>>& basis_embeddings() const { return basis_embed_; }
    long precision_bits() const { return prec_bits_; }
    mpfr_prec_t work_prec() const { return static_cast<mpfr_prec_t>(prec_bits_ + 64); }
    const std::string& label() const { return label_; }
    const QVec& mult_entry(int i, int j) const { return mult_table_[i * degree_ + j]; }

    QVec mul_coords(const QVec& x, const QVec& y) const {
        int d = degree_;
        QVec out(d, 0);
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (y[j] == 0) continue;
                mpq_class f = x[i] * y[j];
                const QVec& row = mult_entry(i, j);
                for (int k = 0; k < d; ++k)
                    if (row[k] != 0) out[k] += f * row[k];
            }
        }
        return out;
    }

    QVec sigma_coords(const QVec& x, long k) const {
        int d = degree_;
        long e = ((k % d) + d) % d;
        const ZMat& s = sigma_pow_[static_cast<std::size_t>(e)];
        QVec out(d, 0);
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < d; ++j)
                if (s[i][j] != 0) out[j] += x[i] * mpq_class(s[i][j]);
        }
        return out;
    }

    // Multiplication-by-x matrix on the integral basis; column j holds the
    // coordinates of x*omega_j.
    QMat mult_matrix(const QVec& x) const {
        int d = degree_;
        QMat m(d, QVec(d, 0));
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                if (x[i] == 0) continue;
                const QVec& row = mult_entry(i, j);
                for (int k = 0; k < d; ++k)
                    if (row[k] != 0) m[k][j] += x[i] * row[k];
            }
        }
        return m;
    }

    mpq_class norm_coords(const QVec& x) const { return q_det(mult_matrix(x)); }

    // Fast exact norm for integer coordinate vectors when the multiplication
    // table is integral (always the case for a genuine integral basis).
    mpz_class norm_int(const long* x) const {
        int d = degree_;
        ZMat m(d, ZVec(d, 0));
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                if (x[i] == 0) continue;
                const ZVec& row = mult_int_[static_cast<std::size_t>(i * d + j)];
                for (int k = 0; k < d; ++k)
                    if (row[k] != 0) m[k][j] += x[i] * row[k];
            }
        return z_det(std::move(m));
    }
    bool has_int_tables() const { return has_int_tables_; }

    mpq_class trace_coords(const QVec& x) const {
        int d = degree_;
        mpq_class t = 0;
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0) continue;
            for (int k = 0; k < d; ++k) t += x[i] * mult_entry(i, k)[k];
        }
        return t;
    }

    // Embedding images of a coordinate vector at every place, plus the
    // reported error bound 2^(-p/2) * (1 + sum |coords|).
    EmbedResult embed_coords(const QVec& x) const {
        mpfr_prec_t wp = work_prec();
        std::vector<BigComplex> vals;
        vals.reserve(places_.size());
        double coord_mass = 0;
        for (const auto& c : x) coord_mass += std::abs(c.get_d());
        for (std::size_t v = 0; v < places_.size(); ++v) {
            BigComplex acc(wp);
            for (int i = 0; i < degree_; ++i) {
                if (x[i] == 0) continue;
                BigFloat xi = BigFloat::of(x[i], wp);
                acc.re.fma_acc(xi, basis_embed_[v][static_cast<std::size_t>(i)].re);
                acc.im.fma_acc(xi, basis_embed_[v][static_cast<std::size_t>(i)].im);
            }
            vals.push_back(std::move(acc));
        }
        double err = std::ldexp(1.0 + coord_mass, static_cast<int>(-prec_bits_ / 2));
        return {std::move(vals), err};
    }

    // Rebuild the same exact field at a different working precision.
    FieldPtr at_precision(long bits) const;

    friend FieldPtr make_field_spec(FieldData data, long precision_bits);

private:
    int degree_ = 0;
    std::vector<mpz_class> min_poly_;
    QMat basis_;
    std::vector<QVec> mult_table_;  // row-major d*d entries
    std::vector<ZVec> mult_int_;
    bool has_int_tables_ = false;
    ZMat sigma_;
    std::vector<ZMat> sigma_pow_;
    int r1_ = 0, r2_ = 0;
    mpz_class disc_;
    long prec_bits_ = 192;
    std::vector<Place> places_;
    std::vector<std::vector<BigComplex>> basis_embed_;
    std::string label_;
    FieldData source_;
};

// An element of the field as an exact rational coordinate vector over the
// integral basis. Immutable; all arithmetic is exact.
class Element {
public:
    Element() = default;
    Element(FieldPtr f, QVec coords) : f_(std::move(f)), c_(std::move(coords)) {
        for (auto& q : c_) q.canonicalize();
    }

    const FieldPtr& field() const { return f_; }
    const QVec& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0) return false;
        return true;
    }
    bool is_integral() const {
        for (const auto& q : c_)
            if (q.get_den() != 1) return false;
        return true;
    }
    ZVec integer_coords() const {
        if (!is_integral()) throw ConfigError("element is not integral");
        ZVec z;
        z.reserve(c_.size());
        for (const auto& q : c_) z.push_back(q.get_num());
        return z;
    }

    friend bool operator==(const Element& a, const Element& b) {
        return a.f_.get() == b.f_.get() && a.c_ == b.c_;
    }

    friend Element operator+(const Element& a, const Element& b) {
        a.check_same(b);
        QVec out(a.c_);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.c_[i];
        return Element(a.f_, std::move(out));
    }
    friend Element operator-(const Element& a, const Element& b) {
        a.check_same(b);
        QVec out(a.c_);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.c_[i];
        return Element(a.f_, std::move(out));
    }
    Element operator-() const {
        QVec out(c_);
        for (auto& q : out) q = -q;
        return Element(f_, std::move(out));
    }
    friend Element operator*(const Element& a, const Element& b) {
        a.check_same(b);
        return Element(a.f_, a.f_->mul_coords(a.c_, b.c_));
    }
    Element scaled(const mpq_class& s) const {
        QVec out(c_);
        for (auto& q : out) q *= s;
        return Element(f_, std::move(out));
    }

    mpq_class norm() const { return f_->norm_coords(c_); }
    mpq_class trace() const { return f_->trace_coords(c_); }
    EmbedResult embed() const { return f_->embed_coords(c_); }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!first && c_[i] > 0) os << "+";
            if (i == 0) {
                os << c_[i].get_str();
            } else {
                if (c_[i] == -1)
                    os << "-";
                else if (c_[i] != 1)
                    os << c_[i].get_str() << "*";
                os << "w" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check_same(const Element& o) const {
        if (f_.get() != o.f_.get()) throw ConfigError("mismatched fields");
    }
    FieldPtr f_;
    QVec c_;
};

inline Element make_element(const FieldPtr& f, QVec coords) {
    if (static_cast<int>(coords.size()) != f->degree())
        throw ConfigError("coordinate vector has wrong length");
    return Element(f, std::move(coords));
}

inline Element make_element_int(const FieldPtr& f, const std::vector<long>& coords) {
    QVec q(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) q[i] = coords[i];
    return make_element(f, std::move(q));
}

inline Element field_zero(const FieldPtr& f) { return Element(f, QVec(f->degree(), 0)); }
inline Element field_one(const FieldPtr& f) {
    QVec c(f->degree(), 0);
    c[0] = 1;
    return Element(f, std::move(c));
}

// sigma^k(a), exact; k is reduced mod the degree.
inline Element apply_sigma(const Element& a, long k = 1) {
    return Element(a.field(), a.field()->sigma_coords(a.coords(), k));
}

// Exact division: the unique c with c*b = a.
inline Element div_exact(const Element& a, const Element& b) {
    if (a.field().get() != b.field().get()) throw ConfigError("mismatched fields");
    if (b.is_zero()) throw ConfigError("division by zero element");
    return Element(a.field(), q_solve(a.field()->mult_matrix(b.coords()), a.coords()));
}

inline QVec unit_qvec(int d, int i) {
    QVec v(static_cast<std::size_t>(d), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

namespace detail {

inline void check_monic_min_poly(const FieldData& d) {
    if (d.degree < 2) throw ConfigError("degree must be at least 2");
    if (static_cast<int>(d.min_poly.size()) != d.degree + 1)
        throw ConfigError("min_poly must have degree+1 coefficients");
    if (d.min_poly.back() != 1) throw ConfigError("min_poly must be monic");
    // Rational-root screen: a monic integer polynomial with an integer root is
    // reducible. Complete for degrees 2 and 3.
    mpz_class c0 = d.min_poly.front();
    if (c0 == 0) throw ConfigError("min_poly is reducible (root 0)");
    auto eval_at = [&](const mpz_class& n) {
        mpz_class acc = 0;
        for (std::size_t i = d.min_poly.size(); i-- > 0;) acc = acc * n + d.min_poly[i];
        return acc;
    };
    mpz_class a = abs(c0);
    for (mpz_class t = 1; t * t <= a && t < 100000; ++t) {
        if (a % t != 0) continue;
        mpz_class lo = t, hi = a / t;
        for (const mpz_class& div : {lo, hi}) {
            if (eval_at(div) == 0 || eval_at(-div) == 0)
                throw ConfigError("min_poly is reducible (rational root)");
        }
    }
}

inline std::vector<QVec> build_mult_table(const FieldData& d, const QMat& basis_inv) {
    int n = d.degree;
    std::vector<QVec> table(static_cast<std::size_t>(n) * n);
    // Reduce a theta-power polynomial mod the monic min_poly.
    auto reduce = [&](std::vector<mpq_class> poly) {
        for (std::size_t k = poly.size(); k-- > static_cast<std::size_t>(n);) {
            if (poly[k] == 0) continue;
            mpq_class c = poly[k];
            poly[k] = 0;
            for (int i = 0; i < n; ++i) poly[k - static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] -= c * d.min_poly[static_cast<std::size_t>(i)];
        }
        poly.resize(static_cast<std::size_t>(n));
        return poly;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<mpq_class> prod(2 * static_cast<std::size_t>(n), 0);
            for (int a = 0; a < n; ++a) {
                if (d.integral_basis[i][a] == 0) continue;
                for (int b = 0; b < n; ++b) {
                    if (d.integral_basis[j][b] == 0) continue;
                    prod[static_cast<std::size_t>(a + b)] += d.integral_basis[i][a] * d.integral_basis[j][b];
                }
            }
            QVec theta_coords = reduce(std::move(prod));
            // Express in the integral basis: solve P * y = theta_coords where
            // column i of P is basis polynomial i.
            QVec y(static_cast<std::size_t>(n), 0);
            for (int r = 0; r < n; ++r) {
                mpq_class acc = 0;
                for (int c = 0; c < n; ++c) acc += basis_inv[r][c] * theta_coords[static_cast<std::size_t>(c)];
                y[static_cast<std::size_t>(r)] = acc;
            }
            table[static_cast<std::size_t>(i * n + j)] = std::move(y);
        }
    }
    return table;
}

}  // namespace detail

inline FieldPtr make_field_spec(FieldData data, long precision_bits) {
    if (precision_bits < 64 || precision_bits > (1L << 20))
        throw ConfigError("precision must be in [64, 1048576] bits");
    detail::check_monic_min_poly(data);
    int d = data.degree;
    if (data.r1 < 0 || data.r2 < 0 || data.r1 + 2 * data.r2 != d)
        throw ConfigError("signature does not satisfy r1 + 2*r2 = degree");
    if (data.r1 != 0 && data.r2 != 0)
        throw ConfigError("cyclic field must be totally real or totally imaginary");
    if (static_cast<int>(data.integral_basis.size()) != d)
        throw ConfigError("integral_basis must have degree rows");
    for (auto& row : data.integral_basis) {
        if (static_cast<int>(row.size()) != d) throw ConfigError("integral_basis rows must have degree entries");
        for (auto& q : row) q.canonicalize();
    }
    {
        QVec one(static_cast<std::size_t>(d), 0);
        one[0] = 1;
        if (data.integral_basis[0] != one) throw ConfigError("integral basis must start with 1");
    }
    if (static_cast<int>(data.sigma.size()) != d)
        throw ConfigError("sigma_on_basis must be a degree x degree matrix");
    for (const auto& row : data.sigma)
        if (static_cast<int>(row.size()) != d)
            throw ConfigError("sigma_on_basis must be a degree x degree matrix");

    auto spec = std::make_shared<FieldSpec>();
    spec->degree_ = d;
    spec->min_poly_ = data.min_poly;
    spec->basis_ = data.integral_basis;
    spec->sigma_ = data.sigma;
    spec->r1_ = data.r1;
    spec->r2_ = data.r2;
    spec->prec_bits_ = precision_bits;
    spec->label_ = data.label;

    // Change of basis from theta powers to the integral basis.
    QMat p(static_cast<std::size_t>(d), QVec(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = data.integral_basis[i][k];
    QMat basis_inv;
    try {
        basis_inv = q_inverse(p);
    } catch (const ConfigError&) {
        throw ConfigError("integral basis is linearly dependent");
    }
    spec->mult_table_ = detail::build_mult_table(data, basis_inv);

    // A basis of an order has an integer multiplication table.
    for (const auto& row : spec->mult_table_)
        for (const auto& q : row)
            if (q.get_den() != 1)
                throw ConfigError(
                    "integral_basis is not multiplication-closed (a product has non-integer "
                    "coordinates)");
    spec->has_int_tables_ = true;
    spec->mult_int_.reserve(spec->mult_table_.size());
    for (const auto& row : spec->mult_table_) {
        ZVec z;
        z.reserve(row.size());
        for (const auto& q : row) z.push_back(q.get_num());
        spec->mult_int_.push_back(std::move(z));
    }

    // Galois generator checks: determinant, exact order d, ring homomorphism.
    {
        QMat sq(static_cast<std::size_t>(d), QVec(static_cast<std::size_t>(d)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) sq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = data.sigma[i][j];
        mpq_class det = q_det(sq);
        if (det != 1 && det != -1) throw ConfigError("sigma matrix determinant must be +1 or -1");
    }
    spec->sigma_pow_.push_back(z_identity(static_cast<std::size_t>(d)));
    ZMat acc = z_identity(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        acc = z_mat_mul(acc, data.sigma);
        if (k < d) {
            if (z_mat_is_identity(acc)) {
                std::ostringstream os;
                os << "sigma has order " << k << " != " << d;
                throw ConfigError(os.str());
            }
            spec->sigma_pow_.push_back(acc);
        } else if (!z_mat_is_identity(acc)) {
            std::ostringstream os;
            os << "sigma^" << d << " is not the identity";
            throw ConfigError(os.str());
        }
    }
    for (int i = 0; i < d; ++i) {
        QVec si = spec->sigma_coords(unit_qvec(d, i), 1);
        for (int j = i; j < d; ++j) {
            QVec sj = spec->sigma_coords(unit_qvec(d, j), 1);
            QVec lhs = spec->sigma_coords(spec->mult_entry(i, j), 1);
            QVec rhs = spec->mul_coords(si, sj);
            if (lhs != rhs) throw ConfigError("sigma is not a ring homomorphism");
        }
    }

    // Discriminant of the basis from the trace form; cross-check the supplied
    // value when present.
    {
        QMat gram(static_cast<std::size_t>(d), QVec(static_cast<std::size_t>(d)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = spec->trace_coords(spec->mult_entry(i, j));
        mpq_class det = q_det(gram);
        if (det.get_den() != 1) throw ConfigError("trace form discriminant is not an integer");
        if (data.discriminant != 0 && det.get_num() != data.discriminant) {
            std::ostringstream os;
            os << "discriminant mismatch: config says " << data.discriminant << ", trace form gives "
               << det.get_num();
            throw ConfigError(os.str());
        }
        spec->disc_ = det.get_num();
    }

    // Embeddings: root isolation in double precision, Newton polish in mpfr.
    {
        mpfr_prec_t wp = spec->work_prec();
        auto seeds = initial_roots(data.min_poly);
        std::vector<double> real_seeds;
        std::vector<std::complex<double>> cplx_seeds;
        for (const auto& z : seeds) {
            if (std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z)))
                real_seeds.push_back(z.real());
            else if (z.imag() > 0)
                cplx_seeds.push_back(z);
        }
        if (static_cast<int>(real_seeds.size()) != data.r1 ||
            static_cast<int>(cplx_seeds.size()) != data.r2) {
            std::ostringstream os;
            os << "signature mismatch: min_poly has " << real_seeds.size() << " real roots, config says r1="
               << data.r1;
            throw ConfigError(os.str());
        }
        std::sort(real_seeds.rbegin(), real_seeds.rend());
        std::sort(cplx_seeds.begin(), cplx_seeds.end(),
                  [](const std::complex<double>& a, const std::complex<double>& b) {
                      if (a.real() != b.real()) return a.real() > b.real();
                      return a.imag() > b.imag();
                  });
        for (double s : real_seeds) {
            Place pl;
            pl.is_real = true;
            pl.root = BigComplex(refine_real_root(data.min_poly, s, wp), BigFloat(wp));
            spec->places_.push_back(std::move(pl));
        }
        for (auto s : cplx_seeds) {
            Place pl;
            pl.is_real = false;
            pl.root = refine_complex_root(data.min_poly, s, wp);
            spec->places_.push_back(std::move(pl));
        }
        BigFloat tol = BigFloat::of(1L, wp);
        mpfr_mul_2si(tol.raw(), tol.raw(), -static_cast<long>(precision_bits / 2), MPFR_RNDN);
        for (const auto& pl : spec->places_) {
            BigComplex val = poly_eval(data.min_poly, pl.root);
            if (!(sqrt(val.abs2()) < tol)) throw ConfigError("embedding refinement failed accuracy target");
        }
        for (const auto& pl : spec->places_) {
            std::vector<BigComplex> row;
            for (int i = 0; i < d; ++i) {
                BigComplex acc(wp);
                for (int k = d - 1; k >= 0; --k) {
                    acc = acc * pl.root;
                    if (data.integral_basis[i][k] != 0)
                        acc.re += BigFloat::of(data.integral_basis[i][k], wp);
                }
                row.push_back(std::move(acc));
            }
            spec->basis_embed_.push_back(std::move(row));
        }
    }

    spec->source_ = std::move(data);
    return spec;
}

inline FieldPtr FieldSpec::at_precision(long bits) const {
    return make_field_spec(source_, bits);
}

// The field Q(sqrt(n)) for squarefree n > 1, with the standard integral basis
// and sigma(sqrt(n)) = -sqrt(n).
inline FieldPtr make_real_quadratic(long n, long precision_bits = 192) {
    if (n <= 1) throw ConfigError("d must be an integer > 1");
    for (long i = 2; i * i <= n; ++i)
        if (n % (i * i) == 0) throw ConfigError("d must be squarefree");
    FieldData fd;
    fd.degree = 2;
    fd.min_poly = {mpz_class(-n), 0, 1};
    fd.r1 = 2;
    fd.r2 = 0;
    if (((n % 4) + 4) % 4 == 1) {
        fd.integral_basis = {{1, 0}, {mpq_class(1, 2), mpq_class(1, 2)}};
        fd.sigma = {{1, 0}, {1, -1}};  // sigma((1+t)/2) = 1 - (1+t)/2
    } else {
        fd.integral_basis = {{1, 0}, {0, 1}};
        fd.sigma = {{1, 0}, {0, -1}};
    }
    fd.label = "Q(sqrt" + std::to_string(n) + ")";
    return make_field_spec(std::move(fd), precision_bits);
}

}  // namespace normone
