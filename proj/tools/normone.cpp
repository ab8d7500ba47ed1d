// normone: batch CLI for norm-one equidistribution data of cyclic number
// fields. Subcommands: field-info, enumerate, weyl, discrepancy, lcheck,
// oracle, accept. Outputs deterministic CSV plus JSON summaries.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "normone/acceptance.hpp"
#include "normone/config.hpp"
#include "normone/hilbert90.hpp"
#include "normone/lseries.hpp"
#include "normone/report_io.hpp"
#include "normone/torus.hpp"

namespace {

using namespace normone;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitAcceptance = 4;

struct CommonArgs {
    std::string field = "builtin:sqrt2";
    std::vector<double> bounds;
    std::vector<std::string> k_specs;
    std::vector<double> s_values{2.0};
    double cutoff = 1e4;
    long grid = 256;
    std::string out = "normone_out";
    int workers = 1;
    long precision = 192;
    double memory_budget = 1e9;
    long box = 20;
    double tol = 1e-8;
};

std::vector<Character> parse_characters(const std::vector<std::string>& specs, int rank) {
    std::vector<Character> out;
    for (const std::string& spec : specs) {
        Character chi;
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ':')) chi.k.push_back(std::stol(part));
        if (static_cast<int>(chi.k.size()) != rank) {
            std::ostringstream os;
            os << "character '" << spec << "' has " << chi.k.size() << " components, torus rank is "
               << rank;
            throw ConfigError(os.str());
        }
        out.push_back(std::move(chi));
    }
    if (out.empty()) out.push_back(Character{std::vector<long>(static_cast<std::size_t>(rank), 0)});
    return out;
}

void validate_bounds(const std::vector<double>& bounds) {
    if (bounds.empty()) throw ConfigError("--bounds is required");
    for (std::size_t i = 1; i < bounds.size(); ++i)
        if (!(bounds[i] > bounds[i - 1])) throw ConfigError("--bounds must be strictly increasing");
}

long effective_precision(long flag_value) {
    if (const char* env = std::getenv("NORMONE_PRECISION_BITS")) {
        try {
            return std::stol(env);
        } catch (...) {
            throw ConfigError("NORMONE_PRECISION_BITS is not an integer");
        }
    }
    return flag_value;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::string path = dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    return f;
}

std::string bound_tag(double r) {
    std::ostringstream os;
    os << r;
    std::string s = os.str();
    for (char& c : s)
        if (c == '+' || c == '.') c = '_';
    return s;
}

nlohmann::json field_info_json(const LoadedField& lf) {
    const FieldPtr& f = lf.field;
    nlohmann::json j;
    j["label"] = f->label();
    j["degree"] = f->degree();
    j["signature"] = {f->r1(), f->r2()};
    j["discriminant"] = f->discriminant().get_str();
    std::vector<std::string> mp;
    for (const auto& c : f->min_poly()) mp.push_back(c.get_str());
    j["min_poly"] = mp;
    j["torus_rank"] = f->torus_rank();
    j["precision_bits"] = f->precision_bits();
    j["regulator"] = lf.units.regulator().to_double();
    j["roots_of_unity"] = lf.units.roots_of_unity();
    j["class_number_hint"] = lf.units.class_number_hint().get_str();
    std::vector<std::string> units;
    for (const auto& u : lf.units.fundamental_units()) units.push_back(u.str());
    j["fundamental_units"] = units;
    j["assumptions"] = lf.units.assumptions();
    ResiduePrediction pred = residue_prediction(lf.units);
    j["residue_prediction"] = {{"kappa", pred.kappa}, {"C", pred.c}};
    return j;
}

int cmd_field_info(const CommonArgs& args) {
    LoadedField lf = resolve_field(args.field, effective_precision(args.precision));
    nlohmann::json j = field_info_json(lf);
    std::cout << j.dump(2) << std::endl;
    open_out(args.out, "field.json") << j.dump(2) << "\n";
    return 0;
}

int cmd_enumerate(const CommonArgs& args) {
    validate_bounds(args.bounds);
    LoadedField lf = resolve_field(args.field, effective_precision(args.precision));
    EnumerateOptions opts;
    opts.workers = args.workers;
    opts.max_box_volume = args.memory_budget;
    nlohmann::json summary;
    summary["field"] = field_info_json(lf);
    nlohmann::json runs = nlohmann::json::array();
    std::vector<std::pair<double, std::size_t>> counts;
    for (double r : args.bounds) {
        EnumerationReport rep = enumerate_visible(lf.units, r, opts);
        auto csv = open_out(args.out, "enum_" + bound_tag(r) + ".csv");
        write_enumeration_csv(rep, csv);
        nlohmann::json jr = enumeration_to_json(rep);
        jr.erase("classes");  // summary stays small; the CSV holds the rows
        runs.push_back(std::move(jr));
        counts.emplace_back(r, rep.count());
        std::cout << lf.field->label() << " r=" << r << ": " << rep.count() << " classes ("
                  << rep.wall_seconds << " s)\n";
    }
    summary["runs"] = std::move(runs);
    if (counts.size() >= 3) {
        CountingFit fit = counting_fit(counts);
        ExponentFit ef = fit_exponent(counts);
        summary["counting_fit"] = {{"c_hat", fit.c_hat},
                                   {"residuals", fit.residuals},
                                   {"exponent_diagnostic", ef.exponent}};
    }
    open_out(args.out, "enumerate.json") << summary.dump(2) << "\n";
    return 0;
}

int cmd_weyl(const CommonArgs& args) {
    validate_bounds(args.bounds);
    LoadedField lf = resolve_field(args.field, effective_precision(args.precision));
    std::vector<Character> chars = parse_characters(args.k_specs, lf.field->torus_rank());
    EnumerateOptions opts;
    opts.workers = args.workers;
    opts.max_box_volume = args.memory_budget;
    std::vector<WeylReport> rows;
    nlohmann::json jrows = nlohmann::json::array();
    for (double r : args.bounds) {
        EnumerationReport rep = enumerate_visible(lf.units, r, opts);
        for (const Character& chi : chars) {
            WeylReport w = weyl_sum(rep, chi);
            std::cout << "r=" << r << " k=";
            for (std::size_t i = 0; i < chi.k.size(); ++i)
                std::cout << (i ? ":" : "") << chi.k[i];
            std::cout << " |S|/n=" << w.normalized << " (n=" << w.count << ")\n";
            jrows.push_back(weyl_to_json(w));
            rows.push_back(std::move(w));
        }
    }
    auto csv = open_out(args.out, "weyl.csv");
    write_weyl_csv(rows, lf.field->torus_rank(), csv);
    nlohmann::json j;
    j["field"] = lf.field->label();
    j["assumptions"] = lf.units.assumptions();
    j["rows"] = std::move(jrows);
    open_out(args.out, "weyl.json") << j.dump(2) << "\n";
    return 0;
}

int cmd_discrepancy(const CommonArgs& args) {
    validate_bounds(args.bounds);
    LoadedField lf = resolve_field(args.field, effective_precision(args.precision));
    EnumerateOptions opts;
    opts.workers = args.workers;
    opts.max_box_volume = args.memory_budget;
    std::vector<std::pair<double, StarDiscrepancy>> rows;
    for (double r : args.bounds) {
        EnumerationReport rep = enumerate_visible(lf.units, r, opts);
        StarDiscrepancy d = star_discrepancy(rep, args.grid);
        std::cout << "r=" << r << " D*=" << d.value << (d.exact ? " (exact)" : " (grid)") << "\n";
        rows.emplace_back(r, d);
    }
    auto csv = open_out(args.out, "discrepancy.csv");
    write_discrepancy_csv(rows, csv);
    return 0;
}

int cmd_lcheck(const CommonArgs& args) {
    LoadedField lf = resolve_field(args.field, effective_precision(args.precision));
    std::vector<Character> chars = parse_characters(args.k_specs, lf.field->torus_rank());
    for (double s : args.s_values)
        if (!(s > 1.0)) throw ConfigError("lcheck requires s > 1");
    EnumerateOptions opts;
    opts.workers = args.workers;
    opts.max_box_volume = args.memory_budget;
    EnumerationReport rep = enumerate_visible(lf.units, args.cutoff + 1.0, opts);
    std::vector<std::pair<Character, IdentityCheck>> rows;
    nlohmann::json jrows = nlohmann::json::array();
    for (const Character& chi : chars) {
        for (double s : args.s_values) {
            IdentityCheck ic = identity_check(lf.units, rep, chi, s, args.cutoff);
            std::cout << "s=" << s << " X=" << args.cutoff << " ratio=" << ic.ratio
                      << " |ratio-1|=" << ic.residual_one << " matches " << ic.matches
                      << "*zeta(ds)" << (ic.insufficient_cutoff ? " [insufficient cutoff]" : "")
                      << "\n";
            jrows.push_back(identity_to_json(chi, ic));
            rows.emplace_back(chi, ic);
        }
    }
    auto csv = open_out(args.out, "lcheck.csv");
    write_lcheck_csv(rows, lf.field->torus_rank(), csv);
    nlohmann::json j;
    j["field"] = lf.field->label();
    j["assumptions"] = lf.units.assumptions();
    j["rows"] = std::move(jrows);
    open_out(args.out, "lcheck.json") << j.dump(2) << "\n";
    return 0;
}

int cmd_oracle(const CommonArgs& args) {
    validate_bounds(args.bounds);
    LoadedField lf = resolve_field(args.field, effective_precision(args.precision));
    double r = args.bounds.back();
    EnumerateOptions opts;
    opts.workers = args.workers;
    opts.max_box_volume = args.memory_budget;
    EnumerationReport fast = enumerate_visible(lf.units, r, opts);
    EnumerationReport oracle = brute_force_oracle(lf.units, args.box, r);
    bool match = fast.count() == oracle.count();
    for (std::size_t i = 0; match && i < fast.count(); ++i)
        match = fast.classes[i].alpha == oracle.classes[i].alpha &&
                fast.classes[i].h == oracle.classes[i].h;
    auto csv = open_out(args.out, "oracle_" + bound_tag(r) + ".csv");
    write_enumeration_csv(oracle, csv);
    nlohmann::json j;
    j["field"] = lf.field->label();
    j["r"] = r;
    j["box"] = args.box;
    j["enumerate_count"] = fast.count();
    j["oracle_count"] = oracle.count();
    j["match"] = match;
    open_out(args.out, "oracle.json") << j.dump(2) << "\n";
    std::cout << "oracle box " << args.box << " r=" << r << ": " << oracle.count()
              << " classes, match=" << (match ? "yes" : "no") << "\n";
    return 0;
}

int cmd_accept(const CommonArgs& args) {
    AcceptanceOptions opts;
    std::filesystem::create_directories(args.out);
    opts.artifacts_dir = args.out + "/acceptance_artifacts";
    opts.workers = args.workers;
    auto results = run_acceptance(opts, std::cout);
    int failures = 0;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : results) {
        if (!r.pass) ++failures;
        rows.push_back({{"id", r.id},
                        {"name", r.name},
                        {"pass", r.pass},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
    }
    open_out(args.out, "accept.json") << rows.dump(2) << "\n";
    return failures == 0 ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"norm-one equidistribution toolkit for cyclic number fields"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool with_bounds) {
        cmd->add_option("--field", args.field,
                        "builtin:sqrtN | builtin:{cubic13,gaussian,eisenstein,cyclotomic5} | config path");
        if (with_bounds) cmd->add_option("--bounds", args.bounds, "height bounds, e.g. 1e3,1e4,1e5")->delimiter(',');
        cmd->add_option("--k", args.k_specs, "characters: 1,2,-1 or 1:0,0:1 for rank 2")->delimiter(',');
        cmd->add_option("--s", args.s_values, "s values (s > 1)")->delimiter(',');
        cmd->add_option("--cutoff", args.cutoff, "truncation cutoff X");
        cmd->add_option("--grid", args.grid, "discrepancy grid resolution");
        cmd->add_option("--out", args.out, "output directory");
        cmd->add_option("--workers", args.workers, "enumeration worker threads");
        cmd->add_option("--precision-bits", args.precision,
                        "working precision (NORMONE_PRECISION_BITS overrides)");
        cmd->add_option("--memory-budget", args.memory_budget, "max search box volume");
        cmd->add_option("--box", args.box, "oracle box radius");
        cmd->add_option("--tol", args.tol, "collision tolerance");
    };

    auto* c_info = app.add_subcommand("field-info", "print field and unit system data");
    add_common(c_info, false);
    auto* c_enum = app.add_subcommand("enumerate", "enumerate visible classes per bound");
    add_common(c_enum, true);
    auto* c_weyl = app.add_subcommand("weyl", "character sums over enumerations");
    add_common(c_weyl, true);
    auto* c_disc = app.add_subcommand("discrepancy", "star discrepancy of torus points");
    add_common(c_disc, true);
    auto* c_lcheck = app.add_subcommand("lcheck", "truncated L-series identity check");
    add_common(c_lcheck, false);
    auto* c_oracle = app.add_subcommand("oracle", "brute-force oracle cross-check");
    add_common(c_oracle, true);
    auto* c_accept = app.add_subcommand("accept", "run the acceptance suite");
    add_common(c_accept, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << std::endl;
        return kExitUsage;
    }

    try {
        if (c_info->parsed()) return cmd_field_info(args);
        if (c_enum->parsed()) return cmd_enumerate(args);
        if (c_weyl->parsed()) return cmd_weyl(args);
        if (c_disc->parsed()) return cmd_discrepancy(args);
        if (c_lcheck->parsed()) return cmd_lcheck(args);
        if (c_oracle->parsed()) return cmd_oracle(args);
        if (c_accept->parsed()) return cmd_accept(args);
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << std::endl;
        return kExitResource;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitConfig;
    }
    return kExitUsage;
}
