#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "normone/errors.hpp"
#include "normone/hilbert90.hpp"

namespace normone {

struct Character {
    std::vector<long> k;
    bool trivial() const {
        for (long x : k)
            if (x) return false;
        return true;
    }
};

inline std::complex<double> character_eval(const Character& chi, const std::vector<double>& t) {
    if (chi.k.size() != t.size()) throw ConfigError("character dimension mismatch");
    if (chi.trivial()) return {1.0, 0.0};
    double phase = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) phase += static_cast<double>(chi.k[i]) * t[i];
    phase *= 2.0 * M_PI;
    return {std::cos(phase), std::sin(phase)};
}

struct WeylReport {
    double r = 0.0;
    std::vector<long> k;
    std::complex<double> S{0.0, 0.0};
    double normalized = 0.0;  // |S| / count
    std::size_t count = 0;
    double err = 0.0;
};

inline WeylReport weyl_sum(const EnumerationReport& rep, const Character& chi) {
    if (static_cast<int>(chi.k.size()) != rep.torus_rank)
        throw ConfigError("character dimension mismatch");
    WeylReport out;
    out.r = rep.r;
    out.k = chi.k;
    out.count = rep.count();
    if (chi.trivial()) {
        out.S = {static_cast<double>(out.count), 0.0};
        out.normalized = out.count ? 1.0 : 0.0;
        out.err = 0.0;
        return out;
    }
    double kmass = 0.0;
    for (long x : chi.k) kmass += std::fabs(static_cast<double>(x));
    std::complex<double> s{0.0, 0.0};
    double err = 0.0;
    for (const auto& vc : rep.classes) {
        s += character_eval(chi, vc.t);
        err += 2.0 * M_PI * kmass * vc.err + 4e-16;
    }
    out.S = s;
    out.normalized = out.count ? std::abs(s) / static_cast<double>(out.count) : 0.0;
    out.err = err;
    return out;
}

struct StarDiscrepancy {
    double value = 0.0;
    int dim = 0;
    long grid = 0;
    bool exact = false;  // exact only in dimension 1
};

// Star discrepancy of the torus points. Dimension 1 uses the exact
// sorted-points formula; higher dimensions evaluate anchored boxes on a
// grid^dim lattice of corners (declared resolution 1/grid).
inline StarDiscrepancy star_discrepancy(const EnumerationReport& rep, long grid = 128) {
    if (rep.classes.empty()) throw ConfigError("star_discrepancy of an empty report");
    if (rep.torus_rank < 1) throw ConfigError("star_discrepancy needs torus dimension >= 1");
    StarDiscrepancy out;
    out.dim = rep.torus_rank;
    std::size_t n = rep.classes.size();
    if (rep.torus_rank == 1) {
        std::vector<double> xs;
        xs.reserve(n);
        for (const auto& vc : rep.classes) xs.push_back(vc.t[0]);
        std::sort(xs.begin(), xs.end());
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double hi = static_cast<double>(i + 1) / static_cast<double>(n) - xs[i];
            double lo = xs[i] - static_cast<double>(i) / static_cast<double>(n);
            worst = std::max({worst, hi, lo});
        }
        out.value = worst;
        out.exact = true;
        return out;
    }
    int dim = rep.torus_rank;
    if (grid < 2) throw ConfigError("grid must be >= 2");
    double cells_d = std::pow(static_cast<double>(grid), dim);
    if (cells_d > 6.7e7) throw ConfigError("grid^dim too large");
    std::size_t cells = static_cast<std::size_t>(cells_d);
    std::vector<double> acc(cells, 0.0);
    std::vector<std::size_t> stride(static_cast<std::size_t>(dim));
    stride[0] = 1;
    for (int a = 1; a < dim; ++a) stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a - 1)] * static_cast<std::size_t>(grid);
    for (const auto& vc : rep.classes) {
        std::size_t idx = 0;
        for (int a = 0; a < dim; ++a) {
            long c = static_cast<long>(std::floor(vc.t[static_cast<std::size_t>(a)] * static_cast<double>(grid)));
            c = std::clamp(c, 0L, grid - 1);
            idx += static_cast<std::size_t>(c) * stride[static_cast<std::size_t>(a)];
        }
        acc[idx] += 1.0;
    }
    // in-place prefix sums along each axis
    for (int a = 0; a < dim; ++a) {
        std::size_t g = static_cast<std::size_t>(grid);
        std::size_t sa = stride[static_cast<std::size_t>(a)];
        for (std::size_t idx = 0; idx < cells; ++idx) {
            std::size_t coord = (idx / sa) % g;
            if (coord > 0) acc[idx] += acc[idx - sa];
        }
    }
    double worst = 0.0;
    double nn = static_cast<double>(n);
    std::vector<long> corner(static_cast<std::size_t>(dim), 1);
    while (true) {
        std::size_t idx = 0;
        double vol = 1.0;
        for (int a = 0; a < dim; ++a) {
            idx += static_cast<std::size_t>(corner[static_cast<std::size_t>(a)] - 1) * stride[static_cast<std::size_t>(a)];
            vol *= static_cast<double>(corner[static_cast<std::size_t>(a)]) / static_cast<double>(grid);
        }
        worst = std::max(worst, std::fabs(acc[idx] / nn - vol));
        int a = 0;
        while (a < dim && corner[static_cast<std::size_t>(a)] == grid) {
            corner[static_cast<std::size_t>(a)] = 1;
            ++a;
        }
        if (a == dim) break;
        ++corner[static_cast<std::size_t>(a)];
    }
    out.value = worst;
    out.grid = grid;
    out.exact = false;
    return out;
}

struct CountingFit {
    double c_hat = 0.0;
    std::vector<double> residuals;
};

// Least-squares slope of count vs r through the origin.
inline CountingFit counting_fit(const std::vector<std::pair<double, std::size_t>>& points) {
    if (points.size() < 3) throw ConfigError("counting_fit needs at least 3 bounds");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].first > points[i - 1].first))
            throw ConfigError("counting_fit bounds must be strictly increasing");
    double num = 0.0, den = 0.0;
    for (const auto& [r, c] : points) {
        num += r * static_cast<double>(c);
        den += r * r;
    }
    CountingFit out;
    out.c_hat = num / den;
    for (const auto& [r, c] : points) out.residuals.push_back(static_cast<double>(c) - out.c_hat * r);
    return out;
}

struct ExponentFit {
    double exponent = 0.0;
    double scale = 0.0;
};

// Diagnostic log-log fit of count ~ scale * r^exponent.
inline ExponentFit fit_exponent(const std::vector<std::pair<double, std::size_t>>& points) {
    if (points.size() < 3) throw ConfigError("fit_exponent needs at least 3 bounds");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(points.size());
    for (const auto& [r, c] : points) {
        double x = std::log(r), y = std::log(std::max<double>(1.0, static_cast<double>(c)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ExponentFit out;
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.scale = std::exp((sy - out.exponent * sx) / n);
    return out;
}

}  // namespace normone
