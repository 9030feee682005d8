#include "twistheight/cli.hpp"

#include "twistheight/errors.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace twistheight {

Json to_json(const CliConfig &c) {
    return Json{{"precision", c.precision},
                {"trial_bound", c.trial_bound},
                {"format", c.format == output_format::json ? "json" : "text"},
                {"strict", c.strict}};
}

CliConfig config_from_json(const Json &j) {
    CliConfig c;
    if (j.contains("precision"))
        c.precision = j.at("precision").get<unsigned>();
    if (j.contains("trial_bound"))
        c.trial_bound = j.at("trial_bound").get<unsigned long>();
    if (j.contains("format")) {
        std::string f = j.at("format").get<std::string>();
        if (f != "text" && f != "json")
            throw math_error(error_kind::domain, "format must be text or json, got " + f);
        c.format = f == "json" ? output_format::json : output_format::text;
    }
    if (j.contains("strict"))
        c.strict = j.at("strict").get<bool>();
    if (c.precision < 64)
        throw math_error(error_kind::domain, "precision must be at least 64 bits");
    return c;
}

int exit_code_for(error_kind k) {
    switch (k) {
    case error_kind::singular_curve: return exit_code::curve;
    case error_kind::point_not_on_curve: return exit_code::point;
    case error_kind::hypothesis: return exit_code::hypothesis;
    case error_kind::precision: return exit_code::precision;
    case error_kind::domain:
    case error_kind::inexact_division: return exit_code::usage;
    }
    return exit_code::usage;
}

namespace {

std::vector<std::string> split_csv(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }), s.end());
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(item);
    return parts;
}

ExactInt parse_int(const std::string &s) {
    try {
        return ExactInt(s);
    } catch (const std::invalid_argument &) {
        throw math_error(error_kind::domain, "not an integer: '" + s + "'");
    }
}

ExactRational parse_rational(const std::string &s) {
    try {
        ExactRational r(s);
        if (r.get_den() == 0)
            throw std::invalid_argument(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument &) {
        throw math_error(error_kind::domain, "not a rational number: '" + s + "'");
    }
}

WeierstrassModel parse_curve(const std::string &s) {
    auto parts = split_csv(s);
    if (parts.size() == 5)
        return WeierstrassModel::make(parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]),
                                      parse_int(parts[3]), parse_int(parts[4]));
    if (parts.size() == 3)
        return WeierstrassModel::make_short(parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]));
    throw math_error(error_kind::domain, "a curve is a1,a2,a3,a4,a6 or a2,a4,a6");
}

CurvePoint parse_point(const WeierstrassModel &e, const std::string &s) {
    if (s == "O")
        return CurvePoint::infinity();
    auto parts = split_csv(s);
    if (parts.size() != 2)
        throw math_error(error_kind::domain, "a point is x,y or O");
    return CurvePoint::from_affine(e, parse_rational(parts[0]), parse_rational(parts[1]));
}

IntPolynomial parse_polynomial(const std::string &s) {
    std::vector<ExactInt> c;
    for (const auto &p : split_csv(s))
        c.push_back(parse_int(p));
    if (c.empty())
        throw math_error(error_kind::domain, "empty polynomial");
    return IntPolynomial(c);
}

std::string num_text(const Json &n) { return n.at("value").get<std::string>() + " +/- " + n.at("error").get<std::string>(); }

std::string str(const Json &j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

struct FamilyArgs {
    std::string f, F;
    std::vector<std::string> ab;

    TwistFamily build() const {
        if (!ab.empty()) {
            if (!f.empty() || !F.empty())
                throw math_error(error_kind::domain, "give either --ab or --f/--F");
            return closed_form_family(parse_int(ab[0]), parse_int(ab[1]));
        }
        if (f.empty() || F.empty())
            throw math_error(error_kind::domain, "a family needs --f and --F, or --ab A B");
        return construct_family(parse_polynomial(f), parse_polynomial(F));
    }
};

void add_family_options(CLI::App *cmd, FamilyArgs &fa) {
    cmd->add_option("--f", fa.f, "monic irreducible cubic f, coefficients constant term first (e.g. 3,1,0,1)");
    cmd->add_option("--F", fa.F, "quartic F with F' a multiple of f, constant term first (e.g. 0,12,2,0,1)");
    cmd->add_option("--ab", fa.ab, "closed form f = t^3 + A t + B, F = t^4 + 2A t^2 + 4B t")->expected(2);
}

// text renderers

void text_breakdown(std::ostream &out, const Json &b) {
    out << "  archimedean (" << str(b["method"]) << "): " << num_text(b["archimedean"]) << "\n";
    for (const auto &p : b["places"]) {
        out << "  p = " << str(p["place"]) << ": " << str(p["coefficient"]) << " log p = " << num_text(p["value"])
            << "  [" << str(p["case"]);
        if (p.contains("aggregated"))
            out << ", aggregated";
        else
            out << ", A=" << str(p["A"]) << " B=" << str(p["B"]) << " C=" << str(p["C"]) << " N=" << str(p["N"]);
        out << "]\n";
    }
}

void text_report(std::ostream &out, const Json &r) {
    out << "curve " << r["curve"].dump() << ", D sign " << (r["d_sign"].get<int>() > 0 ? "+" : "-") << "\n";
    out << "discriminant " << str(r["discriminant"]["text"]) << "\n";
    out << "|q|          " << num_text(r["abs_q"]) << "\n";
    out << "omega        " << num_text(r["omega"]) << "\n";
    out << "q term       " << num_text(r["q_term"]) << "\n";
    out << "omega term   " << num_text(r["omega_term"]) << "\n";
    out << "prime term   " << num_text(r["prime_term"]) << "\n";
    out << "two term     " << num_text(r["two_term"]) << "\n";
    out << "constant     " << num_text(r["constant"]) << "\n";
    if (!r["d"].is_null()) {
        out << "D            " << str(r["d"]) << " (" << str(r["d_square_free"]["verdict"]) << ")\n";
        out << "bound        " << num_text(r["bound"]) << "\n";
    }
}

void text_certificate(std::ostream &out, const Json &c) {
    out << "verdict      " << str(c["verdict"]) << "\n";
    out << "D            " << str(c["d"]) << "\n";
    out << "curve        " << c["curve"].dump() << "\n";
    out << "point        " << c["point"].dump() << "\n";
    out << "height       " << num_text(c["hhat"]) << "\n";
    out << "lower bound  " << num_text(c["lower_bound"]) << "\n";
    out << "m_max        " << str(c["m_max"]) << "\n";
    for (const auto &n : c["notes"])
        out << "note: " << str(n) << "\n";
}

void text_family(std::ostream &out, const TwistFamily &fam, const Json &hyp) {
    out << "f  = " << fam.f.to_string() << "\n";
    out << "F  = " << fam.F.to_string() << "\n";
    out << "f1 = " << fam.f1.to_string("x") << "\n";
    out << "D  = " << fam.D.to_string() << "\n";
    out << "m  = " << fam.m << "\n";
    out << "lower bound applies to all square-free twists: " << (hyp["applicable"].get<bool>() ? "yes" : "no") << "\n";
}

Json hypotheses_json(const LowerBoundHypotheses &h) {
    auto ob = [](const std::optional<bool> &b) { return b ? Json(*b) : Json(nullptr); };
    return Json{{"applicable", h.applicable()},
                {"sixth_power_free", h.sixth_power_free},
                {"factorization_complete", h.factorization_complete},
                {"b_odd", ob(h.b_odd)},
                {"coprime", ob(h.coprime)},
                {"disc_f_square_free", ob(h.disc_f_square_free)}};
}

Json curve_info_json(const WeierstrassModel &e, const CliConfig &cfg) {
    Factorization f = factor(abs(e.discriminant()), cfg.trial_bound);
    f.sign = sgn(e.discriminant());
    Json minimal = Json::array();
    for (const auto &pp : f.factors) {
        bool ok = true;
        try {
            require_minimal_at(e, pp.prime);
        } catch (const math_error &err) {
            if (err.kind() != error_kind::hypothesis)
                throw;
            ok = false;
        }
        minimal.push_back(Json{{"p", to_json(pp.prime)}, {"minimal", ok}});
    }
    Json j{{"curve", to_json(e)},
           {"b2", to_json(e.b2())},
           {"b4", to_json(e.b4())},
           {"b6", to_json(e.b6())},
           {"b8", to_json(e.b8())},
           {"c4", to_json(e.c4())},
           {"c6", to_json(e.c6())},
           {"discriminant", to_json(e.discriminant())},
           {"factorization", to_json(f)},
           {"j", to_json(e.j_invariant())}};
    j["sixth_power_free"] = f.complete() ? Json(is_sixth_power_free(f)) : Json(nullptr);
    j["minimality"] = minimal;
    j["periods"] = to_json(periods(e, cfg.precision));
    return j;
}

void text_curve_info(std::ostream &out, const Json &j) {
    out << "curve        " << j["curve"].dump() << "\n";
    for (const char *k : {"b2", "b4", "b6", "b8", "c4", "c6"})
        out << std::left << std::setw(13) << k << str(j[k]) << "\n";
    out << "Delta        " << str(j["discriminant"]) << " = " << str(j["factorization"]["text"]) << "\n";
    out << "j            " << str(j["j"]) << "\n";
    out << "6th-power-free: "
        << (j["sixth_power_free"].is_null() ? "unknown" : j["sixth_power_free"].get<bool>() ? "yes" : "no") << "\n";
    for (const auto &m : j["minimality"])
        out << "  p = " << str(m["p"]) << ": " << (m["minimal"].get<bool>() ? "minimal" : "not minimal") << "\n";
    const Json &pd = j["periods"];
    out << "omega1       " << num_text(pd["omega1"]) << "\n";
    out << "q            " << num_text(pd["q"]["re"]) << "\n";
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Canonical heights on elliptic curves and their quadratic twists.\n"
                 "Curves are a1,a2,a3,a4,a6 or a2,a4,a6; points are x,y (rationals allowed) or O.\n"
                 "Polynomials are comma-separated coefficients, constant term first.\n"
                 "Values starting with '-' need the --opt=value form.\n"
                 "Exit codes: 1 usage, 2 singular curve, 3 point not on curve, 4 hypothesis, 5 precision.",
                 "twistheight"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string format = "text", config_file;
    app.add_option("--prec", cfg.precision, "working precision in bits (>= 64)")->check(CLI::Range(64u, 1u << 20));
    app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--trial-bound", cfg.trial_bound, "trial division bound");
    app.add_flag("--strict", cfg.strict, "reject D whose square-freeness is unknown");
    app.add_option("--config", config_file, "JSON config; explicit flags override it");

    std::string curve_s, point_s, d_s, d_sign_s, method_s;
    FamilyArgs fa;
    std::string t_s;
    std::vector<long> range;
    unsigned threads = 0;
    bool allow_unknown = false;

    auto *info = app.add_subcommand("curve-info", "Weierstrass quantities, discriminant, minimality, periods");
    info->add_option("curve", curve_s, "a1,a2,a3,a4,a6 or a2,a4,a6")->required();

    auto *height = app.add_subcommand("height", "canonical height with its local decomposition");
    height->add_option("curve", curve_s, "a1,a2,a3,a4,a6 or a2,a4,a6")->required();
    height->add_option("--point", point_s, "x,y or O")->required();
    height->add_option("--method", method_s, "archimedean method")->check(CLI::IsMember({"theta", "tate"}));

    auto *lb = app.add_subcommand("lower-bound", "lower bound for heights on quadratic twists");
    lb->add_option("curve", curve_s, "a2,a4,a6 or 0,a2,0,a4,a6")->required();
    auto *lb_sign = lb->add_option("--d-sign", d_sign_s, "+ or -")->check(CLI::IsMember({"+", "-"}));
    auto *lb_d = lb->add_option("--d", d_s, "square-free twist parameter");
    lb_sign->excludes(lb_d);
    lb_d->excludes(lb_sign);

    auto *prim = app.add_subcommand("primitivity", "certify that a point on a twist is not a multiple");
    prim->add_option("curve", curve_s, "base curve a2,a4,a6 or 0,a2,0,a4,a6")->required();
    prim->add_option("--d", d_s, "square-free D")->required();
    prim->add_option("--point", point_s, "x,y on the twist by D")->required();

    auto *fam = app.add_subcommand("family", "twist families with an explicit point");
    fam->require_subcommand(1);
    auto *make = fam->add_subcommand("make", "build a family from f and F");
    add_family_options(make, fa);
    auto *inst = fam->add_subcommand("instantiate", "curve and point at t");
    add_family_options(inst, fa);
    inst->add_option("--t", t_s, "parameter")->required();
    auto *scan_cmd = fam->add_subcommand("scan", "primitivity certificates over a range of t");
    add_family_options(scan_cmd, fa);
    scan_cmd->add_option("--range", range, "t_lo t_hi")->expected(2)->required();
    scan_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    scan_cmd->add_flag("--allow-unknown", allow_unknown, "certify D of unknown square-freeness");
    auto *upper = fam->add_subcommand("upper-bound", "height upper bound at t for y^2 = x^3 + 2x^2 + 163x + 2205");
    upper->add_option("--t", t_s, "parameter")->required();
    auto *threshold = fam->add_subcommand(
        "threshold", "scan |t| for the ratio condition of y^2 = x^3 + 2x^2 + 163x + 2205");
    threshold->add_option("--range", range, "|t|_lo |t|_hi")->expected(2)->required();
    threshold->add_option("--threads", threads, "worker threads (0 = all cores)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError &e) {
        std::ostringstream o;
        app.exit(e, o, err);
        return exit_code::usage;
    }

    try {
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in)
                throw math_error(error_kind::domain, "cannot read " + config_file);
            CliConfig loaded = config_from_json(Json::parse(in));
            if (app.count("--prec") == 0)
                cfg.precision = loaded.precision;
            if (app.count("--trial-bound") == 0)
                cfg.trial_bound = loaded.trial_bound;
            if (app.count("--format") == 0)
                format = loaded.format == output_format::json ? "json" : "text";
            if (app.count("--strict") == 0)
                cfg.strict = loaded.strict;
        }
        cfg.format = format == "json" ? output_format::json : output_format::text;
        const unsigned prec = cfg.precision;

        Json result;
        std::function<void()> text;

        if (*info) {
            result = curve_info_json(parse_curve(curve_s), cfg);
            text = [&] { text_curve_info(out, result); };
        } else if (*height) {
            WeierstrassModel e = parse_curve(curve_s);
            CurvePoint p = parse_point(e, point_s);
            if (p.is_infinity())
                throw math_error(error_kind::domain, "the height of O is 0; nothing to compute");
            HeightOptions ho;
            ho.trial_bound = cfg.trial_bound;
            if (!method_s.empty())
                ho.method = method_s == "tate" ? arch_method::tate : arch_method::theta;
            CanonicalHeight h = canonical_height(e, p, prec, ho);
            result = to_json(e, p, h);
            text = [&] {
                out << "height " << num_text(result["height"]);
                if (h.breakdown.torsion)
                    out << " (torsion)";
                out << "\n";
                text_breakdown(out, result["breakdown"]);
            };
        } else if (*lb) {
            WeierstrassModel e = parse_curve(curve_s);
            LowerBoundReport r;
            if (!d_s.empty())
                r = lower_bound(e, parse_int(d_s), prec, cfg.trial_bound, cfg.strict);
            else if (!d_sign_s.empty())
                r = lower_bound(e, d_sign_s == "+" ? 1 : -1, prec, cfg.trial_bound);
            else
                throw math_error(error_kind::domain, "lower-bound needs --d-sign or --d");
            result = to_json(r);
            text = [&] { text_report(out, result); };
        } else if (*prim) {
            WeierstrassModel base = parse_curve(curve_s);
            ExactInt d = parse_int(d_s);
            if (d == 0)
                throw math_error(error_kind::domain, "D = 0");
            CurvePoint p = parse_point(twist(base, d), point_s);
            PrimitivityOptions po;
            po.trial_bound = cfg.trial_bound;
            po.strict = cfg.strict;
            result = to_json(primitivity_check(base, d, p, prec, po));
            text = [&] { text_certificate(out, result); };
        } else if (*make) {
            TwistFamily family = fa.build();
            LowerBoundHypotheses h = uniform_bound_hypotheses(family, cfg.trial_bound);
            result = to_json(family);
            result["hypotheses"] = hypotheses_json(h);
            text = [&, family] { text_family(out, family, result["hypotheses"]); };
        } else if (*inst) {
            TwistFamily family = fa.build();
            result = to_json(instantiate(family, parse_int(t_s), cfg.trial_bound));
            text = [&] {
                out << "t      " << str(result["t"]) << "\nD      " << str(result["D"]) << " ("
                    << str(result["square_free"]["verdict"]) << ")\ncurve  " << result["curve"].dump()
                    << "\npoint  " << result["point"].dump() << "\n";
            };
        } else if (*scan_cmd) {
            TwistFamily family = fa.build();
            if (cfg.strict && allow_unknown)
                throw math_error(error_kind::domain, "--strict and --allow-unknown conflict");
            ScanOptions so;
            so.precision = prec;
            so.trial_bound = cfg.trial_bound;
            so.allow_unknown = allow_unknown;
            so.threads = threads;
            result = Json::array();
            for (const auto &s : scan(family, range[0], range[1], so))
                result.push_back(to_json(s));
            text = [&] {
                out << std::left << std::setw(8) << "t" << std::setw(26) << "D" << std::setw(14) << "verdict"
                    << std::setw(8) << "m_max"
                    << "height\n";
                for (const auto &s : result) {
                    out << std::setw(8) << str(s["t"]) << std::setw(26) << str(s["D"]);
                    if (s["certificate"].is_null()) {
                        out << "skipped: " << str(s["skipped"]) << "\n";
                        continue;
                    }
                    const Json &c = s["certificate"];
                    out << std::setw(14) << str(c["verdict"]) << std::setw(8) << str(c["m_max"])
                        << num_text(c["hhat"]) << "\n";
                }
            };
        } else if (*upper) {
            result = to_json(family_upper_bound(parse_int(t_s), prec, cfg.trial_bound), prec);
            text = [&] {
                out << "t            " << str(result["t"]) << "\nD            " << str(result["D"])
                    << "\narchimedean  < " << num_text(result["archimedean"]) << "\nfinite      <= "
                    << num_text(result["finite"]) << "\ntotal        < " << num_text(result["total"]) << "\n";
            };
        } else if (*threshold) {
            if (range[0] < 0 || range[0] > range[1])
                throw math_error(error_kind::domain, "threshold range is 0 <= lo <= hi");
            ThresholdResult r = threshold_scan(range[0], range[1], prec, threads);
            result = to_json(r, prec);
            text = [&] {
                out << "lower constant " << num_text(result["lower_constant"]) << "\n";
                out << "upper constant " << num_text(result["upper_constant"]) << "\n";
                out << "ratio < 4 for all t >= " << str(result["positive"]) << " and all t <= -"
                    << str(result["negative"]) << " in range\n";
                out << "excluded (bound not positive): " << str(result["excluded"]) << "\n";
            };
        }

        if (cfg.format == output_format::json) {
            Json envelope{{"config", to_json(cfg)}, {"result", result}};
            out << envelope.dump(2) << "\n";
        } else {
            text();
        }
        return exit_code::ok;
    } catch (const math_error &e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const Json::exception &e) {
        err << "error: bad JSON: " << e.what() << "\n";
        return exit_code::usage;
    }
}

} // namespace twistheight
