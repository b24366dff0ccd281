// Command-line front end: one subcommand per library area, machine-readable
// output (json/csv/table), deterministic given the flags.  Exit codes:
// 0 success, 2 precondition violation (including flag parse errors),
// 3 resource guard.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "e2sieve/bounds.hpp"
#include "e2sieve/distribution.hpp"
#include "e2sieve/errors.hpp"
#include "e2sieve/factor_table.hpp"
#include "e2sieve/gpy_sums.hpp"
#include "e2sieve/j_integrals.hpp"
#include "e2sieve/linear_forms.hpp"
#include "e2sieve/parallel.hpp"
#include "e2sieve/polynomial.hpp"
#include "e2sieve/rational.hpp"
#include "e2sieve/tuple_parse.hpp"
#include "e2sieve/weights.hpp"
#include "e2sieve/wirsing.hpp"

namespace {

using e2sieve::Rat;
using json = nlohmann::ordered_json;

constexpr const char* kSchema = "v1";

// ---------------------------------------------------------------------------
// Output plumbing

struct Output {
    json j;
    // Optional explicit tabular form; when absent, csv falls back to the
    // flattened scalar fields of j.
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
};

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const json& j, const std::string& prefix,
             std::vector<std::string>* keys, std::vector<std::string>* vals) {
    for (const auto& [key, value] : j.items()) {
        std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, name, keys, vals);
        } else if (value.is_primitive()) {
            keys->push_back(name);
            vals->push_back(scalar_text(value));
        }
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string to_csv(const Output& out) {
    std::ostringstream os;
    if (!out.csv_header.empty()) {
        for (std::size_t i = 0; i < out.csv_header.size(); ++i)
            os << (i ? "," : "") << csv_escape(out.csv_header[i]);
        os << '\n';
        for (const auto& row : out.csv_rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_escape(row[i]);
            os << '\n';
        }
        return os.str();
    }
    std::vector<std::string> keys, vals;
    flatten(out.j, "", &keys, &vals);
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_escape(keys[i]);
    os << '\n';
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << csv_escape(vals[i]);
    os << '\n';
    return os.str();
}

void table_lines(const json& j, int indent, std::ostringstream& os) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            os << pad << key << ":\n";
            table_lines(value, indent + 1, os);
        } else if (value.is_array()) {
            bool scalars = true;
            for (const auto& el : value) scalars = scalars && el.is_primitive();
            if (scalars) {
                os << pad << key << ": ";
                for (std::size_t i = 0; i < value.size(); ++i)
                    os << (i ? ", " : "") << scalar_text(value[i]);
                os << '\n';
            } else {
                os << pad << key << ":\n";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    os << pad << "  [" << i << "]\n";
                    table_lines(value[i], indent + 2, os);
                }
            }
        } else {
            os << pad << key << ": " << scalar_text(value) << '\n';
        }
    }
}

std::string to_table(const Output& out) {
    std::ostringstream os;
    table_lines(out.j, 0, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Serialization helpers

json rat_field(const Rat& q) { return e2sieve::rat_to_string(q); }

json poly_field(const e2sieve::Poly& p) {
    std::string csv;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        if (i) csv += ',';
        csv += e2sieve::rat_to_string(p.coeffs()[i]);
    }
    if (p.is_zero()) csv = "0";
    return json{{"coeffs", csv}, {"text", p.to_string()}};
}

json forms_field(const e2sieve::LinearTuple& t) {
    json arr = json::array();
    for (const auto& f : t.forms()) arr.push_back(e2sieve::form_to_string(f));
    return arr;
}

json exact_field(const e2sieve::ExactConstant& c) {
    return json{{"exact", c.to_string()},
                {"value", c.numeric()},
                {"sign", c.sign()}};
}

e2sieve::Rat parse_rat_flag(const std::string& s, const char* what) {
    try {
        return e2sieve::rat_from_string(s);
    } catch (const e2sieve::PreconditionError&) {
        throw e2sieve::PreconditionError(std::string(what) + ": cannot parse rational '" + s + "'");
    }
}

// R from either an explicit level or N^(p/q).
std::uint64_t resolve_level(std::uint64_t level, const std::string& power,
                            std::uint64_t n) {
    if (level > 0 && !power.empty())
        throw e2sieve::PreconditionError("give either --level or --level-power, not both");
    if (level > 0) return level;
    if (power.empty()) throw e2sieve::PreconditionError("one of --level/--level-power is required");
    double e = e2sieve::to_double(parse_rat_flag(power, "--level-power"));
    if (!(e > 0.0) || e > 1.0)
        throw e2sieve::PreconditionError("--level-power must lie in (0, 1]");
    double r = std::floor(std::pow(static_cast<double>(n), e) + 1e-9);
    return static_cast<std::uint64_t>(r);
}

std::vector<std::uint64_t> parse_u64_csv(const std::string& s, const char* what) {
    std::vector<std::uint64_t> out;
    std::istringstream in(s);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        try {
            out.push_back(std::stoull(piece));
        } catch (const std::exception&) {
            throw e2sieve::PreconditionError(std::string(what) + ": cannot parse '" + piece + "'");
        }
    }
    if (out.empty()) throw e2sieve::PreconditionError(std::string(what) + ": empty list");
    return out;
}

bool is_squarefree_small(std::uint64_t d) {
    for (std::uint64_t p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Flag blocks shared by several subcommands

struct BetaFlags {
    std::uint64_t beta_n = 0;  // 0 = auto from the tuple at 2N
    std::uint64_t y_floor = 1;
    bool mod4 = false;

    e2sieve::BetaConfig config(const e2sieve::NormalizedTuple& t,
                               std::uint64_t n) const {
        e2sieve::BetaConfig cfg;
        cfg.big_n = beta_n;
        if (cfg.big_n == 0) {
            for (const auto& f : t.tuple().forms()) {
                std::uint64_t v = static_cast<std::uint64_t>(f.a) * 2 * n +
                                  static_cast<std::uint64_t>(f.b > 0 ? f.b : 0);
                if (v > cfg.big_n) cfg.big_n = v;
            }
        }
        cfg.y_floor = y_floor;
        cfg.mod4 = mod4;
        return cfg;
    }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--beta-n", beta_n,
                        "N of the beta window p1^2 <= N < p2^2 (default: largest form value at 2N)");
        cmd->add_option("--y-floor", y_floor, "lower bound floor(Y) on the small prime factor");
        cmd->add_flag("--mod4", mod4, "restrict both prime factors to 1 (mod 4)");
    }
    json to_json(const e2sieve::BetaConfig& cfg) const {
        return json{{"big_n", cfg.big_n}, {"y_floor", cfg.y_floor}, {"mod4", cfg.mod4}};
    }
};

// ---------------------------------------------------------------------------
// Subcommand runners

Output run_admissible(const std::string& tuple_text) {
    e2sieve::LinearTuple t = e2sieve::parse_tuple(tuple_text);
    bool adm = e2sieve::is_admissible(t);
    Output out;
    out.j = json{{"schema", kSchema},
                 {"tuple", e2sieve::tuple_to_string(t)},
                 {"forms", forms_field(t)},
                 {"k", t.k()},
                 {"A", e2sieve::constant_A(t).get_str()},
                 {"admissible", adm}};
    if (adm) {
        e2sieve::NormalizedTuple nt = e2sieve::normalize(t);
        json support = json::array();
        for (auto p : nt.a_support()) support.push_back(p);
        out.j["normalized"] = json{{"forms", forms_field(nt.tuple())},
                                   {"A", nt.A().get_str()},
                                   {"shift_B", nt.shift_B().get_str()},
                                   {"support", support}};
    }
    return out;
}

Output run_singular_series(const std::string& tuple_text, std::uint64_t cutoff,
                           bool raw) {
    e2sieve::LinearTuple t = e2sieve::parse_tuple(tuple_text);
    Output out;
    out.j = json{{"schema", kSchema},
                 {"tuple", e2sieve::tuple_to_string(t)},
                 {"forms", forms_field(t)},
                 {"k", t.k()},
                 {"A", e2sieve::constant_A(t).get_str()},
                 {"admissible", e2sieve::is_admissible(t)}};
    e2sieve::SingularSeriesValue v;
    if (raw) {
        v = e2sieve::singular_series_raw(t, cutoff);
    } else {
        e2sieve::NormalizedTuple nt = e2sieve::normalize(t);
        v = e2sieve::singular_series(nt, cutoff);
    }
    out.j["singular_series"] = json{{"kind", raw ? "raw" : "normalized"},
                                    {"value", v.value},
                                    {"error", v.error_bound},
                                    {"cutoff", v.cutoff}};
    return out;
}

Output run_weights(const std::string& tuple_text, std::uint64_t level,
                   const std::string& poly_csv, std::uint64_t dump, bool fit,
                   int identity_check, std::uint64_t seed) {
    e2sieve::NormalizedTuple nt = e2sieve::normalize(e2sieve::parse_tuple(tuple_text));
    e2sieve::SieveParams params{nt, level, e2sieve::poly_from_csv(poly_csv)};
    params.validate();
    Output out;
    out.j = json{{"schema", kSchema},
                 {"tuple", e2sieve::tuple_to_string(nt.tuple())},
                 {"level", level},
                 {"poly", poly_field(params.poly)}};

    if (identity_check > 0) {
        // Seeded random-rational y-vectors: the Mobius round trip y -> lambda
        // -> y and the two T_delta evaluations must agree exactly.
        std::mt19937_64 rng(seed);
        auto mask = e2sieve::support_mask(nt, level);
        std::vector<std::uint64_t> deltas{1};
        for (std::uint64_t d = 2; d <= 30; ++d)
            if (is_squarefree_small(d) && nt.coprime_to_A(d)) deltas.push_back(d);
        int roundtrip_fail = 0, tdelta_fail = 0;
        for (int trial = 0; trial < identity_check; ++trial) {
            std::vector<Rat> y(level, Rat(0));
            for (std::uint64_t m = 1; m < level; ++m)
                if (mask[m])
                    y[m] = e2sieve::make_rat(static_cast<long>(rng() % 19) - 9,
                                             static_cast<long>(rng() % 9) + 1);
            auto lam = e2sieve::lambda_from_y<Rat>(nt, level, y);
            if (e2sieve::y_from_lambda<Rat>(nt, level, lam) != y) ++roundtrip_fail;
            auto ystar = e2sieve::y_star_from_y<Rat>(nt, level, y);
            for (auto d : deltas)
                if (e2sieve::t_delta_bilinear<Rat>(nt, level, lam, d) !=
                    e2sieve::t_delta_diagonal<Rat>(nt, level, ystar, d))
                    ++tdelta_fail;
        }
        out.j["identity_check"] = json{{"seed", seed},
                                       {"trials", identity_check},
                                       {"deltas", deltas.size()},
                                       {"roundtrip_failures", roundtrip_fail},
                                       {"t_delta_failures", tdelta_fail},
                                       {"passed", roundtrip_fail + tdelta_fail == 0}};
        if (roundtrip_fail + tdelta_fail > 0) out.j["error"] = "identity check failed";
        return out;
    }

    e2sieve::WeightTable table = e2sieve::lambda_table(params);
    std::uint64_t support = 0;
    for (std::uint64_t d = 1; d < level; ++d) support += table.valid[d];
    out.j["support_count"] = support;
    out.j["max_abs"] = table.max_abs;
    out.j["max_lambda_ratio"] = e2sieve::max_lambda_ratio(params, table);
    if (fit) out.j["y_star_fit_constant"] = e2sieve::y_star_fit_constant(params);

    json sample = json::array();
    out.csv_header = {"d", "lambda_hat"};
    std::uint64_t shown = 0;
    for (std::uint64_t d = 1; d < level; ++d) {
        if (!table.valid[d]) continue;
        out.csv_rows.push_back({std::to_string(d), json(table.lambda_hat[d]).dump()});
        if (shown < dump) {
            sample.push_back(json{{"d", d}, {"value", table.lambda_hat[d]}});
            ++shown;
        }
    }
    out.j["lambda_sample"] = sample;
    return out;
}

Output run_sums(const std::string& tuple_text, std::uint64_t n,
                std::uint64_t level, const std::string& level_power,
                const std::string& poly_csv, const std::string& mode, int j_index,
                unsigned nu, bool with_primes, const BetaFlags& beta,
                std::uint64_t max_winners) {
    e2sieve::NormalizedTuple nt = e2sieve::normalize(e2sieve::parse_tuple(tuple_text));
    std::uint64_t r = resolve_level(level, level_power, n);
    e2sieve::SieveParams params{nt, r, e2sieve::poly_from_csv(poly_csv)};
    params.validate();
    e2sieve::BetaConfig cfg = beta.config(nt, n);

    Output out;
    out.j = json{{"schema", kSchema},
                 {"tuple", e2sieve::tuple_to_string(nt.tuple())},
                 {"n", n},
                 {"level", r},
                 {"poly", poly_field(params.poly)},
                 {"mode", mode}};

    auto report_json = [](const e2sieve::SumReport& rep) {
        json comps = json::array();
        for (double c : rep.components) comps.push_back(c);
        return json{{"exact", rep.exact},   {"main_term", rep.main_term},
                    {"ratio", rep.ratio},   {"n", rep.n_base},
                    {"level", rep.level},   {"k", rep.k},
                    {"b", rep.b},           {"components", comps}};
    };

    if (mode == "s0") {
        out.j["report"] = report_json(e2sieve::s0_exact(params, n));
    } else if (mode == "s1") {
        out.j["beta"] = beta.to_json(cfg);
        out.j["report"] = report_json(e2sieve::s1_exact(params, n, j_index, cfg));
    } else if (mode == "spi") {
        out.j["report"] = report_json(e2sieve::spi_exact(params, n, j_index));
    } else if (mode == "combined") {
        out.j["beta"] = beta.to_json(cfg);
        e2sieve::CombinedReport c =
            e2sieve::s_combined(params, n, nu, cfg, with_primes, max_winners);
        out.j["nu"] = nu;
        out.j["with_primes"] = with_primes;
        out.j["report"] = report_json(c.report);
        out.j["s0"] = c.s0;
        out.j["winner_count"] = c.winner_count;
        json winners = json::array();
        for (const auto& w : c.winners) {
            json forms = json::array();
            for (int f : w.forms) forms.push_back(f);
            winners.push_back(json{{"n", w.n}, {"forms", forms}});
        }
        out.j["winners"] = winners;
    } else {
        throw e2sieve::PreconditionError("--mode must be s0, s1, spi, or combined");
    }
    return out;
}

Output run_jint(int k, const std::string& b_text, const std::string& eta_text,
                int nu, const std::string& poly_csv, bool with_primes) {
    e2sieve::JInputs in;
    in.k = k;
    in.B = parse_rat_flag(b_text, "--B");
    in.eta = parse_rat_flag(eta_text, "--eta");
    in.nu = nu;
    in.P = e2sieve::poly_from_csv(poly_csv);
    in.validate();

    Output out;
    out.j = json{{"schema", kSchema},
                 {"k", in.k},
                 {"B", rat_field(in.B)},
                 {"eta", rat_field(in.eta)},
                 {"nu", in.nu},
                 {"poly", poly_field(in.P)},
                 {"with_primes", with_primes},
                 {"window_empty", e2sieve::j_window_empty(in.B, in.eta)}};

    Rat j0v = e2sieve::j0(in.k, in.P);
    Rat jvv = e2sieve::j_varpi(in.k, in.P);
    out.j["j0"] = json{{"exact", e2sieve::rat_to_string(j0v)}, {"value", e2sieve::to_double(j0v)}};
    out.j["j_varpi"] = json{{"exact", e2sieve::rat_to_string(jvv)}, {"value", e2sieve::to_double(jvv)}};
    out.j["j1"] = exact_field(e2sieve::j1(in.k, in.B, in.eta, in.P));
    out.j["j2"] = exact_field(e2sieve::j2(in.k, in.B, in.eta, in.P));
    out.j["j3"] = exact_field(e2sieve::j3(in.k, in.B, in.P));
    out.j["j"] = exact_field(e2sieve::j_total(in, with_primes));
    return out;
}

Output run_bounds(int nu, const std::string& b_text, const std::string& variant) {
    e2sieve::BoundQuery q;
    q.nu = nu;
    q.b = parse_rat_flag(b_text, "--B");
    if (variant == "e2") q.variant = e2sieve::BoundVariant::e2;
    else if (variant == "short-interval") q.variant = e2sieve::BoundVariant::short_interval;
    else if (variant == "two-squares") q.variant = e2sieve::BoundVariant::two_squares;
    else if (variant == "both") q.variant = e2sieve::BoundVariant::both;
    else throw e2sieve::PreconditionError("--variant must be e2, short-interval, two-squares, or both");

    e2sieve::BoundConstants c = e2sieve::leading_constant(q);
    Output out;
    out.j = json{{"schema", kSchema},
                 {"nu", nu},
                 {"B", rat_field(q.b)},
                 {"variant", variant},
                 {"k_threshold", c.k_threshold},
                 {"gap_diameter", c.gap_diameter},
                 {"b_effective", c.b_effective},
                 {"nu_effective", c.nu_effective},
                 {"heuristic", c.heuristic}};
    return out;
}

Output run_min_k(int nu, const std::string& b_text, const std::string& eta_text,
                 const std::string& family, const std::string& poly_csv,
                 const std::string& variant) {
    e2sieve::PFamily fam;
    if (family == "fixed") fam = e2sieve::PFamily::fixed;
    else if (family == "monomial") fam = e2sieve::PFamily::monomial_sqrt_k;
    else throw e2sieve::PreconditionError("--family must be fixed or monomial");
    e2sieve::BoundVariant var;
    if (variant == "e2") var = e2sieve::BoundVariant::e2;
    else if (variant == "short-interval") var = e2sieve::BoundVariant::short_interval;
    else if (variant == "two-squares") var = e2sieve::BoundVariant::two_squares;
    else if (variant == "both") var = e2sieve::BoundVariant::both;
    else throw e2sieve::PreconditionError("--variant must be e2, short-interval, two-squares, or both");

    e2sieve::Poly p;
    if (fam == e2sieve::PFamily::fixed) {
        if (poly_csv.empty()) throw e2sieve::PreconditionError("--poly is required with --family fixed");
        p = e2sieve::poly_from_csv(poly_csv);
    } else if (!poly_csv.empty()) {
        throw e2sieve::PreconditionError("--poly only applies to --family fixed");
    }

    e2sieve::MinKResult r = e2sieve::min_k(nu, parse_rat_flag(b_text, "--B"),
                                           parse_rat_flag(eta_text, "--eta"), fam, p, var);
    Output out;
    out.j = json{{"schema", kSchema},
                 {"nu", nu},
                 {"B", b_text},
                 {"eta", eta_text},
                 {"family", family},
                 {"variant", variant},
                 {"k", r.k},
                 {"poly_at_k", poly_field(r.p_at_k)},
                 {"j_at_k", exact_field(r.j_at_k)}};
    if (r.k > 2) {
        out.j["poly_below"] = poly_field(r.p_below);
        out.j["j_below"] = exact_field(r.j_below);
    } else {
        out.j["j_below"] = nullptr;  // k = 2 is the domain floor
    }
    return out;
}

Output run_e2(std::uint64_t limit, std::uint64_t min_factor, bool mod4,
              bool allow_square, bool gaps, std::uint64_t gap,
              std::uint64_t instances, const std::string& find_csv,
              const std::string& nu_block, std::uint64_t list_limit) {
    e2sieve::E2Options o;
    o.min_factor = min_factor;
    o.mod4 = mod4;
    o.allow_square = allow_square;

    Output out;
    out.j = json{{"schema", kSchema},
                 {"limit", limit},
                 {"options", json{{"min_factor", min_factor},
                                  {"mod4", mod4},
                                  {"allow_square", allow_square}}}};

    e2sieve::FactorTable t = e2sieve::build_factor_table(2, std::max<std::uint64_t>(limit, 3));
    std::uint64_t count = 0;
    json values = json::array();
    out.csv_header = {"n", "p1", "p2"};
    e2sieve::for_each_e2(t, o, [&](std::uint64_t n, std::uint64_t p1, std::uint64_t p2) {
        if (n >= limit) return;
        ++count;
        if (count <= list_limit) {
            values.push_back(n);
            out.csv_rows.push_back({std::to_string(n), std::to_string(p1), std::to_string(p2)});
        }
    });
    out.j["count"] = count;
    out.j["values"] = values;
    out.j["values_truncated"] = count > list_limit;

    if (gaps || gap > 0) {
        e2sieve::GapStats gs = e2sieve::e2_gaps(limit, o, gap, instances);
        json hist = json::object();
        for (const auto& [g, c] : gs.histogram) hist[std::to_string(g)] = c;
        json stats = json{{"count", gs.count},
                          {"first", gs.first},
                          {"last", gs.last},
                          {"histogram", hist}};
        if (gap > 0) {
            json inst = json::array();
            for (const auto& [a, b] : gs.instances)
                inst.push_back(json{{"from", a}, {"to", b}});
            stats["gap"] = gap;
            stats["instances"] = inst;
        }
        out.j["gaps"] = stats;
    }
    if (!find_csv.empty()) {
        auto offsets = parse_u64_csv(find_csv, "--find");
        auto hits = e2sieve::find_e2_patterns(limit, o, offsets, instances);
        json arr = json::array();
        for (auto h : hits) arr.push_back(h);
        out.j["patterns"] = json{{"offsets", find_csv}, {"hits", arr}};
    }
    if (!nu_block.empty()) {
        auto parts = parse_u64_csv(nu_block, "--nu-block");
        if (parts.size() != 2)
            throw e2sieve::PreconditionError("--nu-block wants \"nu,window\"");
        out.j["nu_block"] = json{
            {"nu", parts[0]},
            {"window", parts[1]},
            {"count", e2sieve::nu_block_count(limit, o, static_cast<unsigned>(parts[0]), parts[1])}};
    }
    return out;
}

Output run_bv(std::uint64_t x, double q_value, const std::string& q_rule,
              double h, const std::string& kind_text, const BetaFlags& beta,
              bool keep_terms) {
    double big_q = q_value;
    if (q_rule == "sqrt-log5") {
        double lx = std::log(static_cast<double>(x));
        big_q = std::sqrt(static_cast<double>(x)) / std::pow(lx, 5.0);
    } else if (q_rule != "explicit") {
        throw e2sieve::PreconditionError("--q-rule must be explicit or sqrt-log5");
    }

    e2sieve::MarkKind kind;
    if (kind_text == "primes") kind = e2sieve::MarkKind::primes;
    else if (kind_text == "beta") kind = e2sieve::MarkKind::beta;
    else throw e2sieve::PreconditionError("--kind must be primes or beta");

    e2sieve::BetaConfig cfg;
    const e2sieve::BetaConfig* cfg_ptr = nullptr;
    if (kind == e2sieve::MarkKind::beta) {
        cfg.big_n = beta.beta_n == 0 ? 2 * x : beta.beta_n;
        cfg.y_floor = beta.y_floor;
        cfg.mod4 = beta.mod4;
        cfg_ptr = &cfg;
    }

    e2sieve::BVReport rep = e2sieve::bv_sum(x, big_q, h, kind, cfg_ptr, keep_terms);
    Output out;
    out.j = json{{"schema", kSchema}, {"x", rep.x},
                 {"Q", rep.big_q},    {"q_rule", q_rule},
                 {"h", rep.h},        {"kind", kind_text},
                 {"sum", rep.sum},    {"normalized", rep.normalized}};
    if (cfg_ptr) out.j["beta"] = beta.to_json(cfg);
    if (keep_terms) {
        json terms = json::array();
        out.csv_header = {"q", "weight", "dstar"};
        for (const auto& term : rep.terms) {
            terms.push_back(json{{"q", term.q}, {"weight", term.weight}, {"dstar", term.dstar}});
            out.csv_rows.push_back({std::to_string(term.q), json(term.weight).dump(),
                                    json(term.dstar).dump()});
        }
        out.j["terms"] = terms;
    }
    return out;
}

Output run_wirsing(const std::string& kind_text, int k, std::uint64_t excluded,
                   std::uint64_t z, const std::string& weight_csv, bool exact) {
    e2sieve::GammaSpec spec;
    if (kind_text == "constant-k") spec.kind = e2sieve::GammaKind::constant_k_off_a;
    else if (kind_text == "totient") spec.kind = e2sieve::GammaKind::totient_like;
    else if (kind_text == "unit") spec.kind = e2sieve::GammaKind::unit;
    else throw e2sieve::PreconditionError("--kind must be constant-k, totient, or unit");
    spec.k = k;
    spec.excluded = excluded;
    spec.validate();

    Output out;
    out.j = json{{"schema", kSchema},
                 {"spec", json{{"kind", kind_text},
                               {"k", k},
                               {"excluded", excluded},
                               {"kappa", spec.kappa()}}},
                 {"z", z}};

    e2sieve::WirsingReport rep;
    if (!weight_csv.empty()) {
        e2sieve::Poly f = e2sieve::poly_from_csv(weight_csv);
        rep = e2sieve::wirsing_weighted(spec, z, f);
        out.j["weight"] = poly_field(f);
        out.j["weight_integral"] = e2sieve::rat_to_string(e2sieve::wirsing_weight_integral(spec, f));
    } else {
        rep = e2sieve::wirsing_sum(spec, z);
    }
    out.j["c_gamma"] = rep.c_gamma;
    out.j["lhs"] = rep.lhs;
    out.j["main"] = rep.main;
    out.j["rel_err"] = rep.rel_err;
    if (exact) {
        if (!weight_csv.empty())
            throw e2sieve::PreconditionError("--exact applies only to the unweighted sum");
        out.j["lhs_exact"] = e2sieve::rat_to_string(e2sieve::wirsing_sum_exact(spec, z));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selberg-sieve toolkit for near-primes: weights, detection sums, "
                 "main-term integrals, and distribution diagnostics"};
    app.require_subcommand(1);

    std::string format = "json";
    unsigned threads = 0;
    std::uint64_t seed = 42;
    std::string out_path;
    app.add_option("--format", format, "output format: json, csv, or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--seed", seed, "seed for randomized self-checks (default 42)");
    app.add_option("--out", out_path, "write output to this file instead of stdout");

    // admissible
    auto* adm = app.add_subcommand("admissible", "tuple admissibility and normalization");
    std::string adm_tuple;
    adm->add_option("--tuple", adm_tuple, "comma-separated forms, e.g. \"n,n+2,n+6\"")->required();

    // singular-series
    auto* ss = app.add_subcommand("singular-series", "tuple constant as an Euler product");
    std::string ss_tuple;
    std::uint64_t ss_cutoff = e2sieve::kDefaultSeriesCutoff;
    bool ss_raw = false;
    ss->add_option("--tuple", ss_tuple)->required();
    ss->add_option("--cutoff", ss_cutoff, "Euler-product truncation point");
    ss->add_flag("--raw", ss_raw, "generic product over nu_p instead of the normalized form");

    // weights
    auto* wt = app.add_subcommand("weights", "Selberg weight table lambda_hat");
    std::string wt_tuple, wt_poly = "1";
    std::uint64_t wt_level = 0, wt_dump = 50;
    bool wt_fit = false;
    int wt_check = 0;
    wt->add_option("--tuple", wt_tuple)->required();
    wt->add_option("--level", wt_level, "sieve level R")->required();
    wt->add_option("--poly", wt_poly, "weight polynomial c0,c1,...");
    wt->add_option("--dump", wt_dump, "entries to include in the JSON sample");
    wt->add_flag("--fit", wt_fit, "report the y* linear-fit constant");
    wt->add_option("--identity-check", wt_check,
                   "run this many seeded random-rational identity trials instead");

    // sums
    auto* sm = app.add_subcommand("sums", "detection sums over (N, 2N]");
    std::string sm_tuple, sm_poly = "1", sm_mode = "s0", sm_power;
    std::uint64_t sm_n = 0, sm_level = 0, sm_winners = 25;
    int sm_j = 0;
    unsigned sm_nu = 1;
    bool sm_primes = false;
    BetaFlags sm_beta;
    sm->add_option("--tuple", sm_tuple)->required();
    sm->add_option("--n", sm_n, "window base N")->required();
    sm->add_option("--level", sm_level, "sieve level R");
    sm->add_option("--level-power", sm_power, "R = N^(p/q), e.g. 1/4");
    sm->add_option("--poly", sm_poly, "weight polynomial c0,c1,...");
    sm->add_option("--mode", sm_mode, "s0, s1, spi, or combined");
    sm->add_option("--j", sm_j, "form index for s1/spi");
    sm->add_option("--nu", sm_nu, "subtraction multiplicity for combined");
    sm->add_flag("--with-primes", sm_primes, "add the prime detectors in combined mode");
    sm->add_option("--max-winners", sm_winners, "cap on the winner sample");
    sm_beta.add_flags(sm);

    // jint
    auto* ji = app.add_subcommand("jint", "main-term integrals, exact and numeric");
    int ji_k = 3, ji_nu = 1;
    std::string ji_b = "4", ji_eta = "0", ji_poly = "1";
    bool ji_primes = false;
    ji->add_option("--k", ji_k, "tuple size")->required();
    ji->add_option("--B", ji_b, "level ratio, rational p/q");
    ji->add_option("--eta", ji_eta, "lower cutoff exponent, rational p/q");
    ji->add_option("--nu", ji_nu, "subtraction multiplicity");
    ji->add_option("--poly", ji_poly, "weight polynomial c0,c1,...");
    ji->add_flag("--with-primes", ji_primes, "include the J_varpi prime term");

    // bounds
    auto* bd = app.add_subcommand("bounds", "leading threshold constants");
    int bd_nu = 1;
    std::string bd_b = "4", bd_variant = "e2";
    bd->add_option("--nu", bd_nu);
    bd->add_option("--B", bd_b, "level ratio, rational p/q");
    bd->add_option("--variant", bd_variant, "e2, short-interval, two-squares, or both");

    // min-k
    auto* mk = app.add_subcommand("min-k", "smallest k with certified positive detection constant");
    int mk_nu = 1;
    std::string mk_b = "4", mk_eta = "0", mk_family = "fixed", mk_poly, mk_variant = "e2";
    mk->add_option("--nu", mk_nu);
    mk->add_option("--B", mk_b, "level ratio, rational p/q");
    mk->add_option("--eta", mk_eta, "lower cutoff exponent, rational p/q");
    mk->add_option("--family", mk_family, "fixed or monomial");
    mk->add_option("--poly", mk_poly, "polynomial for --family fixed");
    mk->add_option("--variant", mk_variant, "e2, short-interval, two-squares, or both");

    // e2
    auto* e2c = app.add_subcommand("e2", "products of two primes: stream, gaps, patterns");
    std::uint64_t e2_limit = 0, e2_minf = 0, e2_gap = 0, e2_inst = 100, e2_list = 100;
    bool e2_mod4 = false, e2_sq = false, e2_gaps_flag = false;
    std::string e2_find, e2_nublock;
    e2c->add_option("--limit", e2_limit, "upper bound (exclusive)")->required();
    e2c->add_option("--min-factor", e2_minf, "keep n = p1 p2 only when p1 exceeds this");
    e2c->add_flag("--mod4", e2_mod4, "require p1 = p2 = 1 (mod 4)");
    e2c->add_flag("--allow-square", e2_sq, "admit p^2");
    e2c->add_flag("--gaps", e2_gaps_flag, "report the gap histogram");
    e2c->add_option("--gap", e2_gap, "collect consecutive pairs realizing this gap");
    e2c->add_option("--instances", e2_inst, "cap on collected pairs / pattern hits");
    e2c->add_option("--find", e2_find, "offsets o1,o2,... ; report n with every n+oi an E2 number");
    e2c->add_option("--nu-block", e2_nublock, "\"nu,window\": count q_{i+nu} - q_i <= window");
    e2c->add_option("--list-limit", e2_list, "cap on the values list");

    // bv
    auto* bvc = app.add_subcommand("bv", "weighted sum of Delta* over moduli q <= Q");
    std::uint64_t bv_x = 0;
    double bv_q = 0.0, bv_h = 1.0;
    std::string bv_rule = "explicit", bv_kind = "primes";
    bool bv_terms = false;
    BetaFlags bv_beta;
    bvc->add_option("--x", bv_x, "window parameter")->required();
    bvc->add_option("--q", bv_q, "modulus cutoff Q (with --q-rule explicit)");
    bvc->add_option("--q-rule", bv_rule, "explicit or sqrt-log5 (Q = sqrt(x)/log^5 x)");
    bvc->add_option("--h-base", bv_h, "divisor-weight base h");
    bvc->add_option("--kind", bv_kind, "primes or beta");
    bvc->add_flag("--terms", bv_terms, "include the per-q breakdown");
    bv_beta.add_flags(bvc);

    // wirsing
    auto* wr = app.add_subcommand("wirsing", "mean values of multiplicative functions");
    std::string wr_kind = "unit", wr_weight;
    int wr_k = 1;
    std::uint64_t wr_excluded = 1, wr_z = 0;
    bool wr_exact = false;
    wr->add_option("--kind", wr_kind, "constant-k, totient, or unit");
    wr->add_option("--k", wr_k, "dimension parameter");
    wr->add_option("--excluded", wr_excluded, "gamma vanishes on primes dividing this");
    wr->add_option("--z", wr_z, "summation bound")->required();
    wr->add_option("--weight", wr_weight, "polynomial weight F as c0,c1,...");
    wr->add_flag("--exact", wr_exact, "also report the exact rational sum (z <= 1e5)");

    // Let the global flags (--format, --out, ...) appear after the subcommand.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // malformed invocation = precondition violation
    }

    try {
        e2sieve::set_thread_count(threads);
        Output out;
        if (*adm) out = run_admissible(adm_tuple);
        else if (*ss) out = run_singular_series(ss_tuple, ss_cutoff, ss_raw);
        else if (*wt) out = run_weights(wt_tuple, wt_level, wt_poly, wt_dump, wt_fit, wt_check, seed);
        else if (*sm) out = run_sums(sm_tuple, sm_n, sm_level, sm_power, sm_poly, sm_mode,
                                     sm_j, sm_nu, sm_primes, sm_beta, sm_winners);
        else if (*ji) out = run_jint(ji_k, ji_b, ji_eta, ji_nu, ji_poly, ji_primes);
        else if (*bd) out = run_bounds(bd_nu, bd_b, bd_variant);
        else if (*mk) out = run_min_k(mk_nu, mk_b, mk_eta, mk_family, mk_poly, mk_variant);
        else if (*e2c) out = run_e2(e2_limit, e2_minf, e2_mod4, e2_sq, e2_gaps_flag,
                                    e2_gap, e2_inst, e2_find, e2_nublock, e2_list);
        else if (*bvc) out = run_bv(bv_x, bv_q, bv_rule, bv_h, bv_kind, bv_beta, bv_terms);
        else if (*wr) out = run_wirsing(wr_kind, wr_k, wr_excluded, wr_z, wr_weight, wr_exact);

        std::string rendered;
        if (format == "json") rendered = out.j.dump(2) + "\n";
        else if (format == "csv") rendered = to_csv(out);
        else rendered = to_table(out);

        if (out_path.empty()) {
            std::cout << rendered;
        } else {
            std::ofstream f(out_path);
            if (!f) throw e2sieve::ResourceError("cannot open --out file " + out_path);
            f << rendered;
        }
        bool check_failed = out.j.contains("error");
        return check_failed ? 1 : 0;
    } catch (const e2sieve::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const e2sieve::ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
