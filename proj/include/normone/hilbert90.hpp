#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "normone/errors.hpp"
#include "normone/field.hpp"
#include "normone/units.hpp"

namespace normone {

// The Hilbert-90 map a -> a/sigma(a); exact, lands in the norm-one elements.
inline Element pi_map(const Element& a) {
    if (a.is_zero()) throw ConfigError("pi_map of zero element");
    return div_exact(a, apply_sigma(a, 1));
}

// An integral element is primitive iff the gcd of its coordinates is 1.
inline bool is_primitive(const Element& a) {
    if (a.is_zero()) throw ConfigError("is_primitive of zero element");
    return z_content(a.integer_coords()) == 1;
}

// Unique factorization g = n * alpha with n a positive integer and alpha
// primitive; n is the coordinate gcd, the sign stays with alpha.
struct VisibleDecomposition {
    mpz_class n;
    Element alpha;
};

inline VisibleDecomposition visible_decompose(const Element& g) {
    if (g.is_zero()) throw ConfigError("visible_decompose of zero element");
    mpz_class n = z_content(g.integer_coords());
    return {n, g.scaled(mpq_class(1, n))};
}

struct VisibleClass {
    ZVec alpha;             // canonical representative (unit-reduced, oriented)
    long long h = 0;        // |N(alpha)|
    std::vector<double> t;  // torus point of pi(alpha)
    double err = 0.0;
};

struct EnumerationReport {
    double r = 0.0;
    std::string field_label;
    int degree = 0;
    int torus_rank = 0;
    std::vector<VisibleClass> classes;
    double wall_seconds = 0.0;
    long precision_escalations = 0;
    std::vector<std::string> assumptions;
    std::size_t count() const { return classes.size(); }
};

struct EnumerateOptions {
    int workers = 1;
    double max_box_volume = 1e9;
};

namespace detail {

inline long gcd_long(long a, long b) {
    a = std::labs(a);
    b = std::labs(b);
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Largest integer strictly below r (r > 1).
inline mpz_class strict_upper(double r) {
    double fl = std::floor(r);
    mpz_class m(fl);
    if (fl == r) m -= 1;
    return m;
}

// Lazily escalated reduction contexts shared by all workers. Reduction
// decisions are mathematically determined, so escalation is a pure retry.
class ReduceContext {
public:
    explicit ReduceContext(const UnitSystem& base) : base_(base) {}

    Reduction reduce(const QVec& coords, long* escalations) const {
        try {
            return base_.reduce(make_element(base_.field(), coords));
        } catch (const PrecisionError&) {
        }
        for (int lvl = 0; lvl < 2; ++lvl) {
            const UnitSystem& us = level(lvl);
            if (escalations) ++*escalations;
            try {
                return us.reduce(make_element(us.field(), coords));
            } catch (const PrecisionError&) {
                if (lvl == 1) throw;
            }
        }
        throw PrecisionError("unit reduction failed at maximum escalation");
    }

    const UnitSystem& base() const { return base_; }

private:
    const UnitSystem& level(int lvl) const {
        std::lock_guard<std::mutex> lock(mu_);
        while (static_cast<int>(levels_.size()) <= lvl) {
            long bits = base_.field()->precision_bits() * (levels_.empty() ? 4 : 16);
            levels_.push_back(std::make_shared<UnitSystem>(base_.at_precision(bits)));
        }
        return *levels_[static_cast<std::size_t>(lvl)];
    }

    const UnitSystem& base_;
    mutable std::mutex mu_;
    mutable std::vector<std::shared_ptr<UnitSystem>> levels_;
};

// Machine-word norm evaluation: the multiplication-by-x matrix has entries
// sum_i x_i * table[i][j][k]; with the Hadamard bound checked up front the
// determinant fits __int128 and the hot loop allocates nothing.
struct FastNorm {
    int d = 0;
    bool usable = false;
    std::vector<long> table;  // [((i*d)+j)*d + k]

    static FastNorm build(const FieldSpec& f, long max_coord) {
        FastNorm fn;
        fn.d = f.degree();
        if (!f.has_int_tables() || fn.d > 6) return fn;
        double max_entry = 0.0;
        fn.table.assign(static_cast<std::size_t>(fn.d) * fn.d * fn.d, 0);
        for (int i = 0; i < fn.d; ++i)
            for (int j = 0; j < fn.d; ++j) {
                const QVec& row = f.mult_entry(i, j);
                for (int k = 0; k < fn.d; ++k) {
                    if (!row[static_cast<std::size_t>(k)].get_num().fits_slong_p()) return fn;
                    long v = row[static_cast<std::size_t>(k)].get_num().get_si();
                    fn.table[static_cast<std::size_t>(((i * fn.d) + j) * fn.d + k)] = v;
                    max_entry = std::max(max_entry, std::fabs(static_cast<double>(v)));
                }
            }
        double cell = static_cast<double>(fn.d) * static_cast<double>(max_coord) * max_entry;
        double hadamard = fn.d * std::pow(cell * std::sqrt(static_cast<double>(fn.d)), fn.d);
        fn.usable = cell < 9e17 && hadamard < std::ldexp(1.0, 120);
        return fn;
    }

    __int128 eval(const long* x) const {
        __int128 m[36];
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                long long acc = 0;
                for (int i = 0; i < d; ++i)
                    if (x[i]) acc += x[i] * table[static_cast<std::size_t>(((i * d) + j) * d + k)];
                m[k * d + j] = acc;
            }
        if (d == 2) return m[0] * m[3] - m[1] * m[2];
        if (d == 3)
            return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                   m[2] * (m[3] * m[7] - m[4] * m[6]);
        // Bareiss, exact divisions; sizes bounded by the Hadamard pre-check.
        __int128 prev = 1;
        int sign = 1;
        for (int k = 0; k + 1 < d; ++k) {
            if (m[k * d + k] == 0) {
                int p = k + 1;
                while (p < d && m[p * d + k] == 0) ++p;
                if (p == d) return 0;
                for (int j = 0; j < d; ++j) std::swap(m[k * d + j], m[p * d + j]);
                sign = -sign;
            }
            for (int i = k + 1; i < d; ++i) {
                for (int j = k + 1; j < d; ++j)
                    m[i * d + j] = (m[i * d + j] * m[k * d + k] - m[i * d + k] * m[k * d + j]) / prev;
                m[i * d + k] = 0;
            }
            prev = m[k * d + k];
        }
        return sign * m[(d - 1) * d + (d - 1)];
    }
};

struct CandidateEntry {
    ZVec alpha;
    mpz_class h;
};

using CandidateMap = std::map<std::string, CandidateEntry>;

inline std::string coord_key(const ZVec& v) {
    std::string k;
    for (const auto& x : v) {
        k += x.get_str();
        k += '|';
    }
    return k;
}

// Shared per-candidate pipeline: primitivity and norm filters, then
// canonicalization and exact dedupe.
class CandidateSink {
public:
    CandidateSink(const ReduceContext& ctx, mpz_class hmax, const FastNorm* fast)
        : ctx_(ctx), hmax_(std::move(hmax)), d_(ctx.base().field()->degree()), fast_(fast) {
        if (fast_ && fast_->usable && hmax_.fits_slong_p())
            fast_hmax_ = static_cast<__int128>(hmax_.get_si());
        else
            fast_ = nullptr;
    }

    void consider(const long* x) {
        bool all_zero = true;
        for (int i = 0; i < d_; ++i)
            if (x[i]) all_zero = false;
        if (all_zero) return;
        long g = 0;
        for (int i = 0; i < d_; ++i) g = gcd_long(g, x[i]);
        if (g != 1) return;
        mpz_class h;
        if (fast_) {
            __int128 n = fast_->eval(x);
            if (n < 0) n = -n;
            if (n == 0 || n > fast_hmax_) return;
            h = static_cast<long>(n);
        } else {
            h = abs(ctx_.base().field()->norm_int(x));
            if (h == 0 || h > hmax_) return;
        }
        QVec coords(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) coords[static_cast<std::size_t>(i)] = x[i];
        Reduction red = ctx_.reduce(coords, &escalations);
        ZVec canon = red.reduced.integer_coords();
        std::string key = coord_key(canon);
        map.emplace(std::move(key), CandidateEntry{std::move(canon), std::move(h)});
    }

    CandidateMap map;
    long escalations = 0;

private:
    const ReduceContext& ctx_;
    mpz_class hmax_;
    int d_;
    const FastNorm* fast_;
    __int128 fast_hmax_ = 0;
};

// Norm-gated variant with a cheap integer norm pre-filter when the
// multiplication table fits in machine words.
inline void scan_box(const ReduceContext& ctx, const std::vector<long>& radius, int workers,
                     const mpz_class& hmax, CandidateMap& out, long& escalations) {
    int d = static_cast<int>(radius.size());
    workers = std::max(1, workers);
    std::vector<CandidateMap> maps(static_cast<std::size_t>(workers));
    std::vector<long> escal(static_cast<std::size_t>(workers), 0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    long max_coord = 1;
    for (long rj : radius) max_coord = std::max(max_coord, rj);
    FastNorm fast = FastNorm::build(*ctx.base().field(), max_coord);

    auto run = [&](int id) {
        try {
            CandidateSink sink(ctx, hmax, &fast);
            std::vector<long> x(static_cast<std::size_t>(d));
            for (long x0 = -radius[0]; x0 <= radius[0]; ++x0) {
                if (((x0 + radius[0]) % workers) != id) continue;
                x[0] = x0;
                // odometer over the remaining coordinates
                for (int i = 1; i < d; ++i) x[static_cast<std::size_t>(i)] = -radius[static_cast<std::size_t>(i)];
                while (true) {
                    sink.consider(x.data());
                    int i = 1;
                    while (i < d && x[static_cast<std::size_t>(i)] == radius[static_cast<std::size_t>(i)]) {
                        x[static_cast<std::size_t>(i)] = -radius[static_cast<std::size_t>(i)];
                        ++i;
                    }
                    if (i >= d) break;
                    ++x[static_cast<std::size_t>(i)];
                }
            }
            maps[static_cast<std::size_t>(id)] = std::move(sink.map);
            escal[static_cast<std::size_t>(id)] = sink.escalations;
        } catch (...) {
            errors[static_cast<std::size_t>(id)] = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(run, i);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (auto& m : maps) {
        for (auto& kv : m) out.emplace(std::move(kv.first), std::move(kv.second));
        m.clear();
    }
    for (long e : escal) escalations += e;
}

inline EnumerationReport finalize_report(const UnitSystem& us, double r, CandidateMap&& found,
                                         long escalations,
                                         std::chrono::steady_clock::time_point t0) {
    const FieldPtr& f = us.field();
    EnumerationReport rep;
    rep.r = r;
    rep.field_label = f->label();
    rep.degree = f->degree();
    rep.torus_rank = f->torus_rank();
    rep.assumptions = us.assumptions();
    rep.precision_escalations = escalations;
    rep.classes.reserve(found.size());
    for (auto& kv : found) {
        VisibleClass vc;
        vc.alpha = std::move(kv.second.alpha);
        vc.h = static_cast<long long>(kv.second.h.get_si());
        QVec coords(vc.alpha.size());
        for (std::size_t i = 0; i < vc.alpha.size(); ++i) coords[i] = vc.alpha[i];
        Element alpha = make_element(f, std::move(coords));
        Element beta = pi_map(alpha);
        LogVector lv = log_embed(beta);
        TorusPoint tp = us.torus_coordinates(lv);
        vc.t = std::move(tp.t);
        vc.err = tp.err;
        rep.classes.push_back(std::move(vc));
    }
    std::sort(rep.classes.begin(), rep.classes.end(), [](const VisibleClass& a, const VisibleClass& b) {
        if (a.h != b.h) return a.h < b.h;
        for (std::size_t i = 0; i < a.alpha.size(); ++i) {
            int c = cmp(a.alpha[i], b.alpha[i]);
            if (c) return c < 0;
        }
        return false;
    });
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace detail

// Complete enumeration of visible classes of height below r: one canonical
// representative per unit orbit of primitive integral elements with
// 0 < |N| < r. The search box comes from the unit-cell radii: a reduced
// representative satisfies ||alpha||_v <= r^(1/(r1+r2)) * exp(rho_v) with
// rho_v = (1/2) * sum_i |B_{v,i}|.
inline EnumerationReport enumerate_visible(const UnitSystem& us, double r,
                                           EnumerateOptions opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    const FieldPtr& f = us.field();
    if (r <= 1.0) {
        detail::CandidateMap empty;
        return detail::finalize_report(us, r, std::move(empty), 0, t0);
    }
    int d = f->degree();
    int q = f->num_places();
    int rank = f->torus_rank();

    std::vector<double> rho(static_cast<std::size_t>(q), 0.0);
    for (int v = 0; v < q; ++v) {
        double s = 0.0;
        for (int i = 0; i < rank; ++i)
            s += std::fabs(us.log_matrix()[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)].to_double());
        rho[static_cast<std::size_t>(v)] = 0.5 * s;
    }
    std::vector<double> row_bound;  // per real-ified embedding row
    {
        double base = std::log(r) / q;
        for (int v = 0; v < q; ++v) {
            double amp = std::exp(base + rho[static_cast<std::size_t>(v)]) * (1.0 + 1e-12);
            if (f->places()[static_cast<std::size_t>(v)].is_real) {
                row_bound.push_back(amp);
            } else {
                double zb = std::sqrt(amp);
                row_bound.push_back(zb);
                row_bound.push_back(zb);
            }
        }
    }

    // Real-ified embedding matrix of the basis and its inverse.
    mpfr_prec_t wp = f->work_prec();
    RMat E;
    for (int v = 0; v < q; ++v) {
        RVec re_row, im_row;
        for (int j = 0; j < d; ++j) {
            re_row.push_back(f->basis_embeddings()[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)].re);
            im_row.push_back(f->basis_embeddings()[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)].im);
        }
        E.push_back(std::move(re_row));
        if (!f->places()[static_cast<std::size_t>(v)].is_real) E.push_back(std::move(im_row));
    }
    RMat Einv = r_inverse(E, wp);
    std::vector<long> radius(static_cast<std::size_t>(d), 0);
    double volume = 1.0;
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int row = 0; row < d; ++row)
            s += std::fabs(Einv[static_cast<std::size_t>(j)][static_cast<std::size_t>(row)].to_double()) *
                 row_bound[static_cast<std::size_t>(row)];
        radius[static_cast<std::size_t>(j)] = static_cast<long>(std::ceil(s * (1.0 + 1e-9)));
        volume *= 2.0 * static_cast<double>(radius[static_cast<std::size_t>(j)]) + 1.0;
    }
    if (volume > opts.max_box_volume) {
        std::ostringstream os;
        os << "search box volume " << volume << " exceeds memory budget " << opts.max_box_volume;
        throw ResourceError(os.str(), volume);
    }

    detail::ReduceContext ctx(us);
    detail::CandidateMap found;
    long escalations = 0;
    detail::scan_box(ctx, radius, opts.workers, detail::strict_upper(r), found, escalations);
    return detail::finalize_report(us, r, std::move(found), escalations, t0);
}

// Independent oracle: canonicalize every primitive integral vector in a raw
// coordinate box, with no fundamental-domain pre-bound. Complete for every
// class whose canonical representative lies inside the box.
inline EnumerationReport brute_force_oracle(const UnitSystem& us, long box_radius, double r) {
    auto t0 = std::chrono::steady_clock::now();
    const FieldPtr& f = us.field();
    detail::CandidateMap found;
    long escalations = 0;
    if (box_radius > 0 && r > 1.0) {
        std::vector<long> radius(static_cast<std::size_t>(f->degree()), box_radius);
        detail::ReduceContext ctx(us);
        detail::scan_box(ctx, radius, 1, detail::strict_upper(r), found, escalations);
    }
    return detail::finalize_report(us, r, std::move(found), escalations, t0);
}

struct CollisionGroup {
    std::vector<std::size_t> classes;  // indices into report.classes
};

// Groups of classes whose torus points agree within tol (wrap-aware) but
// whose heights differ.
inline std::vector<CollisionGroup> collision_scan(const EnumerationReport& rep, double tol) {
    std::size_t n = rep.classes.size();
    std::vector<CollisionGroup> out;
    if (n == 0) return out;

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    if (rep.torus_rank == 0) {
        for (std::size_t i = 1; i < n; ++i) unite(0, i);
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rep.classes[a].t[0] < rep.classes[b].t[0];
        });
        for (std::size_t oi = 0; oi < n; ++oi) {
            for (std::size_t oj = oi + 1; oj < n; ++oj) {
                double d0 = rep.classes[order[oj]].t[0] - rep.classes[order[oi]].t[0];
                if (d0 > tol) break;
                if (torus_distance(rep.classes[order[oi]].t, rep.classes[order[oj]].t) <= tol)
                    unite(order[oi], order[oj]);
            }
        }
        // wrap seam: low-end window against high-end window
        for (std::size_t oi = 0; oi < n; ++oi) {
            if (rep.classes[order[oi]].t[0] > tol) break;
            for (std::size_t oj = n; oj-- > 0;) {
                if (1.0 - rep.classes[order[oj]].t[0] > tol) break;
                if (oi == oj) continue;
                if (torus_distance(rep.classes[order[oi]].t, rep.classes[order[oj]].t) <= tol)
                    unite(order[oi], order[oj]);
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    for (auto& kv : groups) {
        if (kv.second.size() < 2) continue;
        bool differing = false;
        for (std::size_t i = 1; i < kv.second.size(); ++i)
            if (rep.classes[kv.second[i]].h != rep.classes[kv.second[0]].h) differing = true;
        if (!differing) continue;
        CollisionGroup g;
        g.classes = kv.second;
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace normone
