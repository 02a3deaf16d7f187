// Command line front end.
//
//   gsvindex index <file>     full report, all routes cross-checked
//   gsvindex check <file>     tangency test and the factor c only
//   gsvindex residue <file>   a single Grothendieck residue
//   gsvindex oracle <file>    homology dimensions, formulas vs brute force
//
// Problem files are line based, `key: value`, with `#` comments:
//
//   vars: x y
//   f: x^2*y + y^3
//   X: 1/3*x^4, 1/3*x^3*y
//
// Residue files carry a numerator and a denominator sequence instead:
//
//   vars: x y
//   h: 3 + y
//   g: x + x*y, y - y^2
//
// Exit codes: 0 on success, 1 on any input or engine failure, 2 when
// routes that should agree do not, 3 when the oracle fails to stabilize.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsvindex/gsvindex.hpp"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string join_dims(const std::vector<long>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(v[i]);
    }
    return out;
}

std::string describe_c(const gsv::TangencyFactor& c, const gsv::ProblemSpec& spec,
                       int cap) {
    std::string body = gsv::format_polynomial(c.c, spec);
    if (c.exact) return body + " (exact)";
    return body + " (series, truncated at degree " + std::to_string(cap) + ")";
}

json problem_json(const gsv::ProblemSpec& spec) {
    json xs = json::array();
    for (const auto& xi : spec.X) xs.push_back(gsv::format_polynomial(xi, spec));
    return {{"vars", spec.vars},
            {"f", gsv::format_polynomial(spec.f, spec)},
            {"X", xs}};
}

json rational_matrix_json(const gsv::RatMatrix& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& a : row) r.push_back(gsv::rational_to_string(a));
        rows.push_back(r);
    }
    return rows;
}

struct ResidueProblem {
    std::vector<std::string> vars;
    gsv::Polynomial h;
    gsv::PolyVector g;
};

ResidueProblem parse_residue_problem(const std::string& text) {
    // Same line discipline as the problem format, different keys.
    ResidueProblem out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    std::optional<std::pair<std::string, int>> hline, gline;
    while (std::getline(in, raw)) {
        ++number;
        std::string s = raw.substr(0, raw.find('#'));
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t colon = s.find(':');
        if (colon == std::string::npos || colon < a)
            throw gsv::SyntaxError("expected 'key: value'", number,
                                   static_cast<int>(a) + 1);
        std::string key = s.substr(a, colon - a);
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        std::string value = s.substr(colon + 1);
        if (key == "vars") {
            std::istringstream vin(value);
            std::string name;
            while (vin >> name) out.vars.push_back(name);
            if (out.vars.empty())
                throw gsv::SyntaxError("empty variable list", number, 1);
        } else if (key == "h") {
            hline = {value, number};
        } else if (key == "g") {
            gline = {value, number};
        } else {
            throw gsv::SyntaxError("unknown key '" + key + "'", number, 1);
        }
    }
    if (out.vars.empty()) throw gsv::SyntaxError("missing 'vars' line", 0, 0);
    if (!hline) throw gsv::SyntaxError("missing 'h' line", 0, 0);
    if (!gline) throw gsv::SyntaxError("missing 'g' line", 0, 0);
    out.h = gsv::parse_polynomial(hline->first, out.vars, hline->second, 0);
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : gline->first) {
        if (ch == ',') { parts.push_back(cur); cur.clear(); }
        else cur += ch;
    }
    parts.push_back(cur);
    if (parts.size() != out.vars.size())
        throw gsv::ArityMismatchError(
            "g has " + std::to_string(parts.size()) + " entries, expected " +
            std::to_string(out.vars.size()));
    for (const auto& part : parts)
        out.g.push_back(gsv::parse_polynomial(part, out.vars, gline->second, 0));
    return out;
}

int run_index(const std::string& path, const gsv::EngineConfig& cfg, bool as_json) {
    gsv::ProblemSpec spec = gsv::parse_problem(slurp(path));
    gsv::IndexReport rep = gsv::full_report(spec, cfg);

    if (as_json) {
        json j;
        j["problem"] = problem_json(rep.problem);
        j["coordinate_change"] =
            rep.change ? rational_matrix_json(*rep.change) : json(nullptr);
        j["c"] = {{"value", gsv::format_polynomial(rep.c.c, rep.problem)},
                  {"exact", rep.c.exact}};
        j["h_star"] = rep.dims.h_star;
        j["h"] = rep.dims.h;
        j["lambda"] = rep.dims.lambda;
        j["dims"] = {{"milnor", rep.dims.milnor},
                     {"b_mod_f", rep.dims.dim_b_mod_f},
                     {"a_mod_f", rep.dims.dim_a_mod_f},
                     {"a_mod_c", rep.dims.dim_a_mod_c},
                     {"term1", rep.dims.term1},
                     {"term2", rep.dims.term2}};
        j["indices"] = {
            {"homological", rep.gsv_homological},
            {"residue", rep.gsv_residue ? json(*rep.gsv_residue) : json(nullptr)},
            {"gomez_mont",
             rep.gsv_gomez_mont ? json(*rep.gsv_gomez_mont) : json(nullptr)},
            {"poincare_hopf",
             rep.poincare_hopf ? json(*rep.poincare_hopf) : json(nullptr)}};
        j["consistent"] = rep.consistent;
        j["truncation"] = {{"start", cfg.trunc_start}, {"cap", cfg.trunc_cap}};
        j["diagnostics"] = rep.diagnostics;
        std::cout << j.dump(2) << "\n";
        return rep.consistent ? 0 : 2;
    }

    std::cout << "f: " << gsv::format_polynomial(rep.problem.f, rep.problem) << "\n";
    std::cout << "X:";
    for (std::size_t i = 0; i < rep.problem.X.size(); ++i)
        std::cout << (i ? ", " : " ")
                  << gsv::format_polynomial(rep.problem.X[i], rep.problem);
    std::cout << "\n";
    if (rep.change) std::cout << "coordinates: changed (generic linear)\n";
    std::cout << "c: " << describe_c(rep.c, rep.problem, cfg.trunc_cap) << "\n";
    std::cout << "h*: " << join_dims(rep.dims.h_star) << "\n";
    std::cout << "h:  " << join_dims(rep.dims.h) << "\n";
    std::cout << "lambda: " << rep.dims.lambda << "  milnor: " << rep.dims.milnor
              << "  dim B/(f): " << rep.dims.dim_b_mod_f << "\n";
    std::cout << "routes: homological = " << rep.gsv_homological;
    std::cout << ", residue = "
              << (rep.gsv_residue ? std::to_string(*rep.gsv_residue) : "skipped");
    std::cout << ", colength = "
              << (rep.gsv_gomez_mont ? std::to_string(*rep.gsv_gomez_mont)
                                     : "skipped")
              << "\n";
    if (rep.poincare_hopf)
        std::cout << "poincare-hopf: " << *rep.poincare_hopf << "\n";
    for (const auto& d : rep.diagnostics) std::cout << "note: " << d << "\n";
    std::cout << "index: " << rep.gsv_homological << " ("
              << (rep.consistent ? "consistent" : "inconsistent") << ")\n";
    return rep.consistent ? 0 : 2;
}

int run_check(const std::string& path, const gsv::EngineConfig& cfg, bool as_json) {
    gsv::ProblemSpec spec = gsv::parse_problem(slurp(path));
    try {
        gsv::TangencyFactor c = gsv::compute_c(spec.f, spec.X, cfg);
        if (as_json) {
            json j;
            j["tangent"] = true;
            j["c"] = {{"value", gsv::format_polynomial(c.c, spec)},
                      {"exact", c.exact}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "tangent: yes\n";
            std::cout << "c: " << describe_c(c, spec, cfg.trunc_cap) << "\n";
        }
        return 0;
    } catch (const gsv::NotTangentError& e) {
        if (as_json) {
            json j;
            j["tangent"] = false;
            j["reason"] = e.what();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "tangent: no\n";
            std::cout << "reason: " << e.what() << "\n";
        }
        return 1;
    }
}

int run_residue(const std::string& path, const gsv::EngineConfig& cfg,
                bool as_json) {
    ResidueProblem prob = parse_residue_problem(slurp(path));
    gsv::ResidueCover cover =
        gsv::monomial_cover(prob.g, static_cast<int>(prob.vars.size()), cfg);
    gsv::Rational value = gsv::residue_from_cover(prob.h, cover);
    if (as_json) {
        json j;
        j["residue"] = gsv::rational_to_string(value);
        j["cover"] = {{"exact", cover.exact}, {"powers", cover.k}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "residue: " << gsv::rational_to_string(value) << "\n";
    }
    return 0;
}

int run_oracle(const std::string& path, const gsv::EngineConfig& cfg, int max_n,
               bool as_json) {
    gsv::ProblemSpec spec = gsv::parse_problem(slurp(path));
    if (spec.n() > max_n) {
        std::cerr << "error: the brute force route is exponential in the number "
                     "of variables; refusing n = "
                  << spec.n() << " > " << max_n
                  << " (raise with --max-oracle-n)\n";
        return 1;
    }

    gsv::IndexReport rep = gsv::full_report(spec, cfg);
    try {
        gsv::OracleDims o = gsv::oracle_dims(rep.problem, cfg);
        bool agree = o.h_star == rep.dims.h_star && o.h == rep.dims.h;
        if (as_json) {
            json j;
            j["problem"] = problem_json(rep.problem);
            j["oracle"] = {{"h_star", o.h_star}, {"h", o.h}, {"orders", o.orders}};
            j["formulas"] = {{"h_star", rep.dims.h_star}, {"h", rep.dims.h}};
            j["agreement"] = agree;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "oracle h*:   " << join_dims(o.h_star) << "\n";
            std::cout << "oracle h:    " << join_dims(o.h) << "\n";
            std::cout << "formula h*:  " << join_dims(rep.dims.h_star) << "\n";
            std::cout << "formula h:   " << join_dims(rep.dims.h) << "\n";
            std::cout << "orders:";
            for (int n : o.orders) std::cout << " " << n;
            std::cout << "\n";
            std::cout << "agreement: " << (agree ? "yes" : "no") << "\n";
        }
        return agree ? 0 : 2;
    } catch (const gsv::NoStabilizationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GSV index of a vector field tangent to a hypersurface "
                 "singularity, in exact arithmetic"};
    app.require_subcommand(1);

    gsv::EngineConfig cfg;
    bool as_json = false;
    int max_oracle_n = 3;
    app.add_option("--trunc-start", cfg.trunc_start,
                   "initial truncation order for stabilization sweeps")
        ->capture_default_str();
    app.add_option("--trunc-cap", cfg.trunc_cap,
                   "give up past this truncation order")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed,
                   "seed for the generic coordinate changes")
        ->capture_default_str();
    app.add_flag("--json", as_json, "machine readable output");

    std::string path;
    auto* sub_index =
        app.add_subcommand("index", "compute the index by every route");
    sub_index->add_option("file", path, "problem file, or - for stdin")
        ->required();
    auto* sub_check =
        app.add_subcommand("check", "test tangency and report the factor c");
    sub_check->add_option("file", path, "problem file, or - for stdin")
        ->required();
    auto* sub_residue =
        app.add_subcommand("residue", "compute one Grothendieck residue");
    sub_residue->add_option("file", path, "residue file, or - for stdin")
        ->required();
    auto* sub_oracle = app.add_subcommand(
        "oracle", "cross-check the formulas against the truncated complexes");
    sub_oracle->add_option("file", path, "problem file, or - for stdin")
        ->required();
    sub_oracle
        ->add_option("--max-oracle-n", max_oracle_n,
                     "largest number of variables the oracle will attempt")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sub_index) return run_index(path, cfg, as_json);
        if (*sub_check) return run_check(path, cfg, as_json);
        if (*sub_residue) return run_residue(path, cfg, as_json);
        if (*sub_oracle) return run_oracle(path, cfg, max_oracle_n, as_json);
    } catch (const gsv::NoStabilizationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
