#pragma once

#include <gmpxx.h>

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "normone/errors.hpp"
#include "normone/field.hpp"
#include "normone/units.hpp"

namespace normone {

// Exact rational from a JSON value: integers directly, strings as "p/q",
// plain integers, or exact decimals ("0.5" = 1/2).
inline mpq_class parse_rational(const nlohmann::json& v, const std::string& where) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.empty()) throw ConfigError(where + ": empty rational");
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac_len = s.size() - dot - 1;
            mpz_class num(digits);
            mpz_class den = 1;
            for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            mpq_class q(num, den);
            q.canonicalize();
            return q;
        }
        try {
            mpq_class q(s);
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            throw ConfigError(where + ": cannot parse rational '" + s + "'");
        }
    }
    throw ConfigError(where + ": rationals must be integers or strings like \"p/q\"");
}

struct FieldConfig {
    FieldData data;
    std::vector<ZVec> fundamental_units;
    int roots_of_unity = 2;
    mpz_class class_number_hint = 1;
};

inline FieldConfig parse_field_config(const std::string& text, const std::string& label_hint = "") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("field config is not valid JSON: ") + e.what());
    }
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw ConfigError(std::string("field config missing key '") + key + "'");
        return j.at(key);
    };
    FieldConfig cfg;
    cfg.data.degree = need("degree").get<int>();
    int d = cfg.data.degree;
    for (const auto& c : need("min_poly")) cfg.data.min_poly.push_back(mpz_class(c.get<long>()));
    const auto& basis = need("integral_basis");
    for (const auto& row : basis) {
        QVec q;
        for (const auto& c : row) q.push_back(parse_rational(c, "integral_basis"));
        if (static_cast<int>(q.size()) != d)
            throw ConfigError("integral_basis rows must have degree entries");
        cfg.data.integral_basis.push_back(std::move(q));
    }
    for (const auto& row : need("sigma_on_basis")) {
        ZVec z;
        for (const auto& c : row) z.push_back(mpz_class(c.get<long>()));
        cfg.data.sigma.push_back(std::move(z));
    }
    const auto& sig = need("signature");
    if (!sig.is_array() || sig.size() != 2) throw ConfigError("signature must be [r1, r2]");
    cfg.data.r1 = sig[0].get<int>();
    cfg.data.r2 = sig[1].get<int>();
    if (j.contains("discriminant")) cfg.data.discriminant = mpz_class(j["discriminant"].get<long>());
    if (j.contains("fundamental_units")) {
        for (const auto& row : j["fundamental_units"]) {
            ZVec z;
            for (const auto& c : row) z.push_back(mpz_class(c.get<long>()));
            if (static_cast<int>(z.size()) != d)
                throw ConfigError("fundamental_units rows must have degree entries");
            cfg.fundamental_units.push_back(std::move(z));
        }
    }
    if (j.contains("roots_of_unity")) cfg.roots_of_unity = j["roots_of_unity"].get<int>();
    if (j.contains("class_number_hint")) {
        cfg.class_number_hint = mpz_class(j["class_number_hint"].get<long>());
        if (cfg.class_number_hint < 1) throw ConfigError("class_number_hint must be positive");
    }
    if (j.contains("label"))
        cfg.data.label = j["label"].get<std::string>();
    else
        cfg.data.label = label_hint.empty() ? "config-field" : label_hint;
    return cfg;
}

// Build a verified FieldSpec from a parsed config.
inline FieldPtr load_field(const FieldConfig& cfg, long precision_bits = 192) {
    return make_field_spec(cfg.data, precision_bits);
}

inline UnitSystem make_unit_system(const FieldPtr& field, const FieldConfig& cfg) {
    std::vector<Element> units;
    units.reserve(cfg.fundamental_units.size());
    for (const auto& z : cfg.fundamental_units) {
        QVec q;
        q.reserve(z.size());
        for (const auto& x : z) q.push_back(mpq_class(x));
        units.push_back(make_element(field, std::move(q)));
    }
    return UnitSystem::build(field, std::move(units), cfg.roots_of_unity, cfg.class_number_hint, true);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---- builtin configs ----

// Simplest cubic field of conductor 13: x^3 - x^2 - 4x - 1, cyclic with
// sigma(theta) = -1/(1+theta) = theta^2 - 2 theta - 2; units theta and
// sigma(theta) are independent (regulator ~ 1.3652).
inline const char* builtin_cubic13_json() {
    return R"({
  "label": "cubic-13",
  "degree": 3,
  "min_poly": [-1, -4, -1, 1],
  "integral_basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "sigma_on_basis": [[1, 0, 0], [-2, -2, 1], [1, -3, 1]],
  "signature": [3, 0],
  "discriminant": 169,
  "fundamental_units": [[0, 1, 0], [-2, -2, 1]],
  "roots_of_unity": 2,
  "class_number_hint": 1
})";
}

inline const char* builtin_gaussian_json() {
    return R"({
  "label": "gaussian",
  "degree": 2,
  "min_poly": [1, 0, 1],
  "integral_basis": [[1, 0], [0, 1]],
  "sigma_on_basis": [[1, 0], [0, -1]],
  "signature": [0, 1],
  "discriminant": -4,
  "fundamental_units": [],
  "roots_of_unity": 4,
  "class_number_hint": 1
})";
}

inline const char* builtin_eisenstein_json() {
    return R"({
  "label": "eisenstein",
  "degree": 2,
  "min_poly": [3, 0, 1],
  "integral_basis": [[1, 0], ["1/2", "1/2"]],
  "sigma_on_basis": [[1, 0], [1, -1]],
  "signature": [0, 1],
  "discriminant": -3,
  "fundamental_units": [],
  "roots_of_unity": 6,
  "class_number_hint": 1
})";
}

// Q(zeta_5): cyclic quartic, totally imaginary, unit rank 1 with fundamental
// unit -(zeta^2 + zeta^3) = (1+sqrt5)/2.
inline const char* builtin_cyclotomic5_json() {
    return R"({
  "label": "cyclotomic-5",
  "degree": 4,
  "min_poly": [1, 1, 1, 1, 1],
  "integral_basis": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
  "sigma_on_basis": [[1, 0, 0, 0], [0, 0, 1, 0], [-1, -1, -1, -1], [0, 1, 0, 0]],
  "signature": [0, 2],
  "discriminant": 125,
  "fundamental_units": [[0, 0, -1, -1]],
  "roots_of_unity": 10,
  "class_number_hint": 1
})";
}

struct LoadedField {
    FieldPtr field;
    UnitSystem units;
};

// Resolve a --field argument: "builtin:sqrtN" (Pell units), a named builtin
// config, or a path to a JSON config file.
inline LoadedField resolve_field(const std::string& source, long precision_bits = 192) {
    if (source.rfind("builtin:", 0) == 0) {
        std::string name = source.substr(8);
        if (name.rfind("sqrt", 0) == 0) {
            long n = 0;
            try {
                n = std::stol(name.substr(4));
            } catch (...) {
                throw ConfigError("bad builtin field name: " + source);
            }
            FieldPtr f = make_real_quadratic(n, precision_bits);
            return {f, UnitSystem::real_quadratic(f)};
        }
        const char* text = nullptr;
        if (name == "cubic13") text = builtin_cubic13_json();
        else if (name == "gaussian") text = builtin_gaussian_json();
        else if (name == "eisenstein") text = builtin_eisenstein_json();
        else if (name == "cyclotomic5") text = builtin_cyclotomic5_json();
        if (!text) throw ConfigError("unknown builtin field: " + source);
        FieldConfig cfg = parse_field_config(text, name);
        FieldPtr f = load_field(cfg, precision_bits);
        return {f, make_unit_system(f, cfg)};
    }
    FieldConfig cfg = parse_field_config(read_text_file(source), source);
    FieldPtr f = load_field(cfg, precision_bits);
    return {f, make_unit_system(f, cfg)};
}

}  // namespace normone
