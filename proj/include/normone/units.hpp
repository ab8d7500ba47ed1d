#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "normone/bigfloat.hpp"
#include "normone/errors.hpp"
#include "normone/field.hpp"
#include "normone/linalg.hpp"

namespace normone {

// Logarithmic embedding of a nonzero element: log ||a||_v per archimedean
// place, where ||.||_v is the absolute value at real places and its square at
// complex places.
struct LogVector {
    std::vector<BigFloat> values;
    double err = 0.0;
};

inline LogVector log_embed(const Element& a) {
    if (a.is_zero()) throw ConfigError("log of zero element");
    EmbedResult em = a.embed();
    const auto& places = a.field()->places();
    LogVector out;
    out.values.reserve(places.size());
    double worst = 0.0;
    for (std::size_t v = 0; v < places.size(); ++v) {
        if (places[v].is_real) {
            BigFloat mag = abs(em.values[v].re);
            double m = mag.to_double();
            if (m <= 2 * em.err)
                throw PrecisionError("embedding too close to zero for a stable logarithm",
                                     2 * a.field()->precision_bits());
            out.values.push_back(log(mag));
            worst = std::max(worst, em.err / m);
        } else {
            BigFloat a2 = em.values[v].abs2();
            double m = std::sqrt(a2.to_double());
            if (m <= 2 * em.err)
                throw PrecisionError("embedding too close to zero for a stable logarithm",
                                     2 * a.field()->precision_bits());
            out.values.push_back(log(a2));
            worst = std::max(worst, 4 * em.err / m);
        }
    }
    out.err = worst + std::ldexp(1.0, -static_cast<int>(a.field()->precision_bits()) + 8);
    return out;
}

inline Element element_pow(const Element& a, long e) {
    if (e == 0) return field_one(a.field());
    Element base = e > 0 ? a : div_exact(field_one(a.field()), a);
    unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
    Element acc = field_one(a.field());
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

// Fundamental unit of a real quadratic field from the continued-fraction
// expansion of the second basis element (theta or (1+theta)/2). Returns the
// unit normalized to be > 1 under the first embedding.
inline Element pell_fundamental_unit(const FieldPtr& field) {
    if (field->degree() != 2 || !field->totally_real())
        throw ConfigError("pell_fundamental_unit expects a real quadratic field");
    const auto& mp = field->min_poly();
    if (mp[1] != 0) throw ConfigError("pell_fundamental_unit expects min_poly x^2 - n");
    mpz_class n = -mp[0];
    if (n <= 1) throw ConfigError("pell_fundamental_unit expects min_poly x^2 - n with n > 1");

    mpz_class P, Q;
    const QVec& gen = field->integral_basis()[1];
    if (gen == QVec{0, 1}) {
        P = 0;
        Q = 1;
    } else if (gen == QVec{mpq_class(1, 2), mpq_class(1, 2)}) {
        P = 1;
        Q = 2;
    } else {
        throw ConfigError("pell_fundamental_unit expects a field from make_real_quadratic");
    }

    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    mpz_class p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
    for (int iter = 0; iter < 2000000; ++iter) {
        if (Q <= 0) throw ConfigError("continued fraction state degenerated");
        mpz_class num = P + s;
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        mpz_class pk = a * p_prev + p_prev2;
        mpz_class qk = a * q_prev + q_prev2;
        p_prev2 = p_prev;
        p_prev = pk;
        q_prev2 = q_prev;
        q_prev = qk;

        Element cand = make_element(field, {mpq_class(pk), mpq_class(-qk)});
        mpq_class nn = cand.norm();
        if (nn == 1 || nn == -1) {
            Element inv = div_exact(field_one(field), cand);
            for (const Element& c : {cand, -cand, inv, -inv}) {
                EmbedResult em = c.embed();
                if (em.values[0].re.cmp_si(1) > 0) return c;
            }
            throw ConfigError("failed to orient fundamental unit");
        }
        mpz_class Pn = a * Q - P;
        mpz_class Qn = (n - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    throw ConfigError("continued fraction did not terminate");
}

struct Reduction {
    Element reduced;
    std::vector<long> exponents;
};

struct TorusPoint {
    std::vector<double> t;
    double err = 0.0;
};

// Wrap-aware sup distance between torus points.
inline double torus_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::fabs(a[i] - b[i]);
        d = std::min(d, 1.0 - d);
        worst = std::max(worst, d);
    }
    return worst;
}

// Unit-group data: fundamental units, the log-unit lattice basis B inside
// ker Sigma, the regulator, roots of unity, and the canonical reduction of
// field elements modulo units.
class UnitSystem {
public:
    static UnitSystem build(const FieldPtr& field, std::vector<Element> fundamental_units, int w,
                            mpz_class class_number_hint, bool from_config) {
        UnitSystem us;
        us.field_ = field;
        us.w_ = w;
        us.hint_ = class_number_hint;
        us.from_config_ = from_config;
        int rank = field->torus_rank();
        if (static_cast<int>(fundamental_units.size()) != rank) {
            std::ostringstream os;
            os << "expected " << rank << " fundamental units, got " << fundamental_units.size();
            throw ConfigError(os.str());
        }
        if (w < 2 || w % 2 != 0) throw ConfigError("roots_of_unity must be even and >= 2");
        if (field->totally_real() && w != 2)
            throw ConfigError("a totally real field has exactly two roots of unity");
        if (class_number_hint < 1) throw ConfigError("class_number_hint must be positive");
        us.units_ = std::move(fundamental_units);
        for (const Element& u : us.units_) {
            if (!u.is_integral()) throw ConfigError("fundamental units must be integral");
            mpq_class nu = u.norm();
            if (nu != 1 && nu != -1) throw ConfigError("fundamental unit has norm != +-1");
        }

        mpfr_prec_t wp = field->work_prec();
        int q = field->num_places();
        us.B_.assign(static_cast<std::size_t>(q), RVec(static_cast<std::size_t>(rank), BigFloat(wp)));
        double log_err = 0.0;
        for (int i = 0; i < rank; ++i) {
            LogVector lv = log_embed(us.units_[static_cast<std::size_t>(i)]);
            log_err = std::max(log_err, lv.err);
            BigFloat colsum(wp);
            for (int v = 0; v < q; ++v) {
                us.B_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] = lv.values[static_cast<std::size_t>(v)];
                colsum += lv.values[static_cast<std::size_t>(v)];
            }
            if (std::fabs(colsum.to_double()) > 10 * q * lv.err + 1e-30)
                throw ConfigError("unit log vector is not in ker Sigma");
        }
        us.unit_log_err_ = log_err;

        if (rank > 0) {
            RMat bsq(static_cast<std::size_t>(rank), RVec(static_cast<std::size_t>(rank), BigFloat(wp)));
            for (int v = 0; v < rank; ++v)
                for (int i = 0; i < rank; ++i) bsq[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] = us.B_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
            us.regulator_ = abs(r_det(bsq));
            if (us.regulator_.to_double() < 1e-10)
                throw ConfigError("fundamental units are not multiplicatively independent (regulator ~ 0)");
            us.Binv_ = r_inverse(bsq, wp);
        } else {
            us.regulator_ = BigFloat::of(1L, wp);  // rank-0 convention
        }

        us.find_torsion();
        us.build_power_cache();

        if (from_config)
            us.assumptions_.push_back(
                "fundamental units supplied by config; fundamentality (index one in U/W) is assumed");
        else
            us.assumptions_.push_back("fundamental unit proven minimal by continued-fraction construction");
        us.assumptions_.push_back("class_number_hint=" + class_number_hint.get_str() + " assumed");
        return us;
    }

    // Builtin path for make_real_quadratic fields.
    static UnitSystem real_quadratic(const FieldPtr& field) {
        return build(field, {pell_fundamental_unit(field)}, 2, 1, false);
    }

    const FieldPtr& field() const { return field_; }
    int rank() const { return field_->torus_rank(); }
    const std::vector<Element>& fundamental_units() const { return units_; }
    int roots_of_unity() const { return w_; }
    const mpz_class& class_number_hint() const { return hint_; }
    const BigFloat& regulator() const { return regulator_; }
    const RMat& log_matrix() const { return B_; }
    const Element& torsion_generator() const { return torsion_gen_; }
    const std::vector<std::string>& assumptions() const { return assumptions_; }
    bool units_from_config() const { return from_config_; }

    UnitSystem at_precision(long bits) const {
        FieldPtr f2 = field_->at_precision(bits);
        std::vector<Element> moved;
        moved.reserve(units_.size());
        for (const Element& u : units_) moved.push_back(make_element(f2, u.coords()));
        return build(f2, std::move(moved), w_, hint_, from_config_);
    }

    Element unit_power(int i, long k) const {
        const auto& cache = upow_[static_cast<std::size_t>(i)];
        if (k >= -POW_CACHE && k <= POW_CACHE)
            return cache[static_cast<std::size_t>(k + POW_CACHE)];
        return element_pow(units_[static_cast<std::size_t>(i)], k);
    }

    // Canonical representative of a modulo the full unit group: lattice
    // coordinates in [-1/2, 1/2) and a fixed orientation under roots of unity.
    Reduction reduce(const Element& a) const {
        if (a.is_zero()) throw ConfigError("cannot unit-reduce zero");
        int rank_ = rank();
        std::vector<long> exps(static_cast<std::size_t>(rank_), 0);
        Element stage = a;
        if (rank_ > 0) {
            RVec c = lattice_coordinates(log_embed(a));
            double guard = std::ldexp(1.0, -static_cast<int>(field_->precision_bits() / 4));
            bool boundary = false;
            for (const BigFloat& ci : c) {
                BigFloat x = ci + half();
                BigFloat frac = x - floor(x);
                double fd = frac.to_double();
                if (fd < guard || fd > 1.0 - guard) boundary = true;
            }
            if (!boundary) {
                for (int i = 0; i < rank_; ++i) {
                    BigFloat m = floor(c[static_cast<std::size_t>(i)] + half());
                    exps[static_cast<std::size_t>(i)] = m.to_long();
                }
            } else {
                exps = resolve_boundary_exponents(a, c);
            }
            for (int i = 0; i < rank_; ++i)
                if (exps[static_cast<std::size_t>(i)] != 0)
                    stage = stage * unit_power(i, -exps[static_cast<std::size_t>(i)]);
        }
        return {orient(stage), std::move(exps)};
    }

    // Coordinates of a norm-one element (or a ker-Sigma log vector) on the
    // torus, reduced mod 1 into [0,1)^rank.
    TorusPoint torus_coordinates(const Element& a) const {
        mpq_class n = a.norm();
        if (n != 1 && n != -1) throw ConfigError("not norm-one: |N| must be exactly 1");
        return torus_coordinates(log_embed(a));
    }
    TorusPoint torus_coordinates(const LogVector& lv) const {
        int q = field_->num_places();
        BigFloat sum(field_->work_prec());
        for (const auto& v : lv.values) sum += v;
        double tol = q * std::max(10 * lv.err, std::ldexp(1.0, -static_cast<int>(field_->precision_bits() / 2)));
        if (std::fabs(sum.to_double()) > tol)
            throw ConfigError("not norm-one: log vector is outside ker Sigma");
        TorusPoint out;
        if (rank() == 0) return out;
        RVec c = lattice_coordinates(lv);
        for (const BigFloat& ci : c) {
            BigFloat t = ci - floor(ci);
            double td = t.to_double();
            if (td >= 1.0) td = 0.0;  // double rounding at the wrap seam
            if (td < 0.0) td = 0.0;
            out.t.push_back(td);
        }
        out.err = lattice_err(lv.err);
        return out;
    }
    double lattice_err(double log_err) const {
        double norm_inf = 0.0;
        for (const auto& row : Binv_) {
            double s = 0.0;
            for (const auto& x : row) s += std::fabs(x.to_double());
            norm_inf = std::max(norm_inf, s);
        }
        int q = field_->num_places();
        return 2.0 * norm_inf * (log_err + unit_log_err_) * q + 1e-30;
    }

private:
    static constexpr long POW_CACHE = 8;

    BigFloat half() const {
        BigFloat h = BigFloat::of(1L, field_->work_prec());
        mpfr_div_2ui(h.raw(), h.raw(), 1, MPFR_RNDN);
        return h;
    }

    // Solve B' c = w' where B' drops the last place row (valid since rows of B
    // sum to zero) and w is the ker-Sigma part of the log vector.
    RVec lattice_coordinates(const LogVector& lv) const {
        mpfr_prec_t wp = field_->work_prec();
        int q = field_->num_places();
        int m = rank();
        BigFloat s(wp);
        for (const auto& v : lv.values) s += v;
        s /= BigFloat::of(static_cast<long>(q), wp);
        RMat bsq(static_cast<std::size_t>(m), RVec(static_cast<std::size_t>(m), BigFloat(wp)));
        for (int v = 0; v < m; ++v)
            for (int i = 0; i < m; ++i) bsq[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] = B_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
        RVec w(static_cast<std::size_t>(m), BigFloat(wp));
        for (int v = 0; v < m; ++v) w[static_cast<std::size_t>(v)] = lv.values[static_cast<std::size_t>(v)] - s;
        return r_solve(std::move(bsq), std::move(w));
    }

    // A coordinate is allowed to sit exactly on a half-integer only when a
    // multiplicative relation forces it; detect that exactly and round in
    // exact rational arithmetic. z = a^(2q) * N(a)^(-e) * prod u_i^(-k_i) has
    // zero log vector iff 2q*c = k; for totally real fields that means
    // z = +-1, for totally imaginary z * conj(z) = 1.
    std::vector<long> resolve_boundary_exponents(const Element& a, const RVec& c) const {
        int m = rank();
        int q = field_->num_places();
        std::vector<long> k(static_cast<std::size_t>(m));
        mpfr_prec_t wp = field_->work_prec();
        BigFloat twoq = BigFloat::of(static_cast<long>(2 * q), wp);
        bool plausible = true;
        for (int i = 0; i < m; ++i) {
            BigFloat scaled = c[static_cast<std::size_t>(i)] * twoq;
            BigFloat r = round_nearest(scaled);
            k[static_cast<std::size_t>(i)] = r.to_long();
            if (std::fabs((scaled - r).to_double()) > 1e-6) plausible = false;
        }
        if (plausible) {
            Element z = element_pow(a, 2 * q);
            mpq_class n = a.norm();
            long e = field_->totally_real() ? 2 : 1;
            mpq_class scale = 1;
            for (long t = 0; t < e; ++t) scale /= n;
            z = z.scaled(scale);
            for (int i = 0; i < m; ++i)
                if (k[static_cast<std::size_t>(i)] != 0) z = z * unit_power(i, -k[static_cast<std::size_t>(i)]);
            Element probe = field_->totally_real() ? z * z : z * apply_sigma(z, field_->degree() / 2);
            if (probe == field_one(field_)) {
                std::vector<long> exps(static_cast<std::size_t>(m));
                for (int i = 0; i < m; ++i) {
                    // floor(k/(2q) + 1/2) computed exactly
                    mpz_class num = k[static_cast<std::size_t>(i)] + q;
                    mpz_class den = 2 * q;
                    mpz_class fl;
                    mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
                    exps[static_cast<std::size_t>(i)] = static_cast<long>(fl.get_si());
                }
                return exps;
            }
        }
        throw PrecisionError("unit reduction coordinate inside the cell boundary guard band",
                             4 * field_->precision_bits());
    }

    // Fix the torsion ambiguity: totally real fields make the first embedding
    // positive; totally imaginary fields put the argument at the first place
    // into [0, 2*pi/w).
    Element orient(const Element& a) const {
        if (field_->totally_real()) {
            EmbedResult em = a.embed();
            if (std::fabs(em.values[0].re.to_double()) <= 4 * em.err)
                throw PrecisionError("cannot determine embedding sign", 2 * field_->precision_bits());
            return em.values[0].re.sgn() < 0 ? -a : a;
        }
        mpfr_prec_t wp = field_->work_prec();
        EmbedResult em = a.embed();
        BigFloat theta = em.values[0].arg();
        BigFloat twopi = BigFloat::pi(wp);
        mpfr_mul_2ui(twopi.raw(), twopi.raw(), 1, MPFR_RNDN);
        if (theta.sgn() < 0) theta += twopi;
        BigFloat x = theta * BigFloat::of(static_cast<long>(w_), wp) / twopi;
        BigFloat j = floor(x);
        double frac = (x - j).to_double();
        long jj = j.to_long() % w_;
        if (jj < 0) jj += w_;
        double guard = std::ldexp(1.0, -static_cast<int>(field_->precision_bits() / 4));
        if (frac < guard || frac > 1.0 - guard) {
            // On a sector boundary the rotated element is exactly real at the
            // first place, which is decidable: conj on place 0 is sigma^(d/2).
            for (long cand : {jj, (jj + 1) % w_}) {
                Element b = a * torsion_power(-cand);
                if (apply_sigma(b, field_->degree() / 2) == b) {
                    EmbedResult bem = b.embed();
                    if (std::fabs(bem.values[0].re.to_double()) <= 4 * bem.err)
                        throw PrecisionError("cannot determine embedding sign",
                                             2 * field_->precision_bits());
                    return bem.values[0].re.sgn() > 0 ? b : b * torsion_power(w_ / 2);
                }
            }
            throw PrecisionError("orientation argument inside the sector boundary guard band",
                                 4 * field_->precision_bits());
        }
        return a * torsion_power(-jj);
    }

    Element torsion_power(long j) const {
        long jj = ((j % w_) + w_) % w_;
        return zeta_pow_[static_cast<std::size_t>(jj)];
    }

    void find_torsion() {
        if (field_->totally_real()) {
            torsion_gen_ = -field_one(field_);
        } else {
            // Roots of unity have small integral coordinates; scan a box and
            // keep the order-w elements, the generator being the one with the
            // smallest positive argument at the first place.
            int d = field_->degree();
            std::vector<long> x(static_cast<std::size_t>(d), -3);
            std::vector<Element> found;
            while (true) {
                bool all_zero = true;
                for (long xi : x)
                    if (xi != 0) all_zero = false;
                if (!all_zero) {
                    Element cand = make_element_int(field_, x);
                    mpq_class n = cand.norm();
                    if (n == 1 || n == -1) {
                        if (element_pow(cand, w_) == field_one(field_)) found.push_back(cand);
                    }
                }
                int i = 0;
                while (i < d && x[static_cast<std::size_t>(i)] == 3) {
                    x[static_cast<std::size_t>(i)] = -3;
                    ++i;
                }
                if (i == d) break;
                ++x[static_cast<std::size_t>(i)];
            }
            if (static_cast<int>(found.size()) != w_) {
                std::ostringstream os;
                os << "roots_of_unity mismatch: found " << found.size() << ", config says " << w_;
                throw ConfigError(os.str());
            }
            const Element* best = nullptr;
            double best_arg = 1e9;
            for (const Element& z : found) {
                bool full_order = true;
                for (int k = 1; k < w_; ++k)
                    if (element_pow(z, k) == field_one(field_)) full_order = false;
                if (!full_order) continue;
                double arg = z.embed().values[0].arg().to_double();
                if (arg > 1e-12 && arg < best_arg) {
                    best_arg = arg;
                    best = &z;
                }
            }
            if (!best) throw ConfigError("no generator of the roots of unity found");
            torsion_gen_ = *best;
        }
        zeta_pow_.clear();
        Element acc = field_one(field_);
        for (int j = 0; j < w_; ++j) {
            zeta_pow_.push_back(acc);
            acc = acc * torsion_gen_;
        }
        if (!(acc == field_one(field_))) throw ConfigError("torsion generator does not have order w");
    }

    void build_power_cache() {
        upow_.clear();
        for (const Element& u : units_) {
            std::vector<Element> row;
            Element inv = div_exact(field_one(field_), u);
            for (long k = -POW_CACHE; k <= POW_CACHE; ++k)
                row.push_back(k < 0 ? element_pow(inv, -k) : element_pow(u, k));
            upow_.push_back(std::move(row));
        }
    }

    FieldPtr field_;
    std::vector<Element> units_;
    int w_ = 2;
    mpz_class hint_ = 1;
    bool from_config_ = false;
    RMat B_;
    RMat Binv_;
    BigFloat regulator_;
    double unit_log_err_ = 0.0;
    Element torsion_gen_;
    std::vector<Element> zeta_pow_;
    std::vector<std::vector<Element>> upow_;
    std::vector<std::string> assumptions_;
};

inline Reduction unit_reduce(const UnitSystem& us, const Element& a) { return us.reduce(a); }

inline TorusPoint torus_coordinates(const UnitSystem& us, const Element& a) {
    return us.torus_coordinates(a);
}
inline TorusPoint torus_coordinates(const UnitSystem& us, const LogVector& lv) {
    return us.torus_coordinates(lv);
}

}  // namespace normone
