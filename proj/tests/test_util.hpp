#pragma once

#include <random>
#include <vector>

#include "normone/field.hpp"

namespace normone::testutil {

inline Element random_integral(const FieldPtr& f, std::mt19937_64& rng, long lo = -9, long hi = 9,
                               bool nonzero = true) {
    std::uniform_int_distribution<long> dist(lo, hi);
    while (true) {
        std::vector<long> c(static_cast<std::size_t>(f->degree()));
        for (auto& x : c) x = dist(rng);
        Element e = make_element_int(f, c);
        if (!nonzero || !e.is_zero()) return e;
    }
}

}  // namespace normone::testutil
