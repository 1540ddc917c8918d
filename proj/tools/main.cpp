#include <afy/alpha_cf.hpp>
#include <afy/ergodic.hpp>
#include <afy/errors.hpp>
#include <afy/farey.hpp>
#include <afy/measure.hpp>
#include <afy/natural_ext.hpp>
#include <afy/rcf.hpp>
#include <afy/serialize.hpp>
#include <afy/verify.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

using namespace afy;
using nlohmann::json;

namespace {

struct Cfg {
    std::string alpha, x, format, output, system = "omega-star", eps, word, check = "all";
    std::vector<std::string> specs;
    std::size_t n = 30, k = 20, points = 20000, samples = 0, max_steps = 2000, tail = 100,
                max_len = 60, norm_n = 50000;
    std::uint64_t seed = 2026;
    long precision = kDefaultFloatPrec;
    int figure = 0;
    bool flat = false, rcf = false;
    double x1 = 0, x2 = 1, y1 = -std::numeric_limits<double>::infinity(), y2 = -1;
};

ExactReal parse_alpha(const std::string& text, long prec) {
    if (text == "sqrt2-1") return ExactReal::surd(-1, 1, 1, 2);
    return ExactReal::parse(text, static_cast<mpfr_prec_t>(prec));
}

long used_precision(std::initializer_list<const ExactReal*> values, long prec) {
    for (const ExactReal* v : values)
        if (v->is_bigfloat()) return prec;
    return 0;  // every input stayed exact
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed on '" + path + "'");
}

std::vector<std::string> split_dots(const std::string& items) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : items) {
        if (c == '.') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

mpz_class parse_mpz(const std::string& tok) {
    try {
        return mpz_class(tok, 10);
    } catch (const std::invalid_argument&) {
        throw ParseError("not an integer: '" + tok + "'");
    }
}

// Inverse of spec_text: "family:items" with '.'-separated digits or
// symbols ("m2", "p1", "z2") and an optional "@lo" window origin.
CylinderSpec parse_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("spec needs the form family:items, got '" + text + "'");
    const std::string fam = text.substr(0, colon);
    std::string items = text.substr(colon + 1);
    CylinderSpec spec;
    if (fam == "alpha-cf")
        spec.family = CylinderFamily::AlphaCF;
    else if (fam == "flat1")
        spec.family = CylinderFamily::Flat1;
    else if (fam == "flat2")
        spec.family = CylinderFamily::Flat2;
    else if (fam == "gauss-planar")
        spec.family = CylinderFamily::GaussPlanar;
    else
        throw ParseError("unknown spec family '" + fam + "'");
    if (const auto at = items.find('@'); at != std::string::npos) {
        try {
            spec.window_lo = std::stol(items.substr(at + 1));
        } catch (const std::exception&) {
            throw ParseError("bad window origin in '" + text + "'");
        }
        items = items.substr(0, at);
    }
    const bool symbolic =
        spec.family == CylinderFamily::Flat1 || spec.family == CylinderFamily::Flat2;
    for (const std::string& tok : split_dots(items)) {
        if (tok.empty()) throw ParseError("empty item in spec '" + text + "'");
        if (symbolic) {
            DeltaSymbol s;
            if (tok[0] == 'm')
                s.cls = DeltaClass::Minus;
            else if (tok[0] == 'p')
                s.cls = DeltaClass::Plus;
            else if (tok[0] == 'z')
                s.cls = DeltaClass::Zero;
            else
                throw ParseError("symbols start with m, p or z: '" + tok + "'");
            s.k = parse_mpz(tok.substr(1));
            spec.symbols.push_back(s);
        } else {
            spec.digits.push_back(parse_mpz(tok));
        }
    }
    validate_cylinder_spec(spec);
    return spec;
}

std::vector<mpz_class> parse_word(const std::string& text) {
    std::vector<mpz_class> word;
    for (const std::string& tok : split_dots(text)) word.push_back(parse_mpz(tok));
    return word;
}

PlanarSystem parse_system(const std::string& text) {
    if (text == "omega-star") return PlanarSystem::OmegaStar;
    if (text == "v") return PlanarSystem::V;
    if (text == "vflat") return PlanarSystem::VFlat;
    throw ParseError("unknown system '" + text + "' (omega-star, v, vflat)");
}

std::string pick_format(const Cfg& cfg, const char* fallback) {
    return cfg.format.empty() ? fallback : cfg.format;
}

[[noreturn]] void bad_format(const std::string& fmt, const char* cmd) {
    throw ParseError("format '" + fmt + "' is not available for " + cmd);
}

json rcf_json(const RunMeta& meta, const RcfExpansion& e) {
    json digits = json::array(), convergents = json::array();
    for (const mpz_class& a : e.digits) digits.push_back(a.get_str());
    for (const auto& [p, q] : e.convergents)
        convergents.push_back(json::array({p.get_str(), q.get_str()}));
    return json{{"meta", meta_json(meta)},    {"x", e.x.str()},
                {"a0", e.a0.get_str()},       {"digits", digits},
                {"convergents", convergents}, {"terminated", e.terminated}};
}

std::string rcf_csv(const RunMeta& meta, const RcfExpansion& e) {
    std::ostringstream out;
    out << text_header(meta) << "n,a,p,q\n";
    for (std::size_t i = 0; i < e.digits.size(); ++i)
        out << (i + 1) << "," << e.digits[i].get_str() << "," << e.convergents[i].first.get_str()
            << "," << e.convergents[i].second.get_str() << "\n";
    return out.str();
}

int cmd_expand(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const ExactReal x = ExactReal::parse(cfg.x, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha, &x}, prec)};
    const std::string fmt = pick_format(cfg, "json");
    if (cfg.rcf) {
        RcfExpansion e = rcf_expand(x, cfg.n);
        if (fmt == "json")
            write_output(cfg.output, json_text(rcf_json(meta, e)));
        else if (fmt == "csv")
            write_output(cfg.output, rcf_csv(meta, e));
        else
            bad_format(fmt, "expand");
        return 0;
    }
    AlphaExpansion e = alpha_expand(alpha, x, cfg.n);
    if (fmt == "json")
        write_output(cfg.output, json_text(expansion_json(meta, e)));
    else if (fmt == "csv")
        write_output(cfg.output, expansion_csv(meta, e));
    else
        bad_format(fmt, "expand");
    return 0;
}

int cmd_mediants(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const ExactReal x = ExactReal::parse(cfg.x, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha, &x}, prec)};
    MediantStream s = cfg.flat ? flat_mediant_sequence(alpha, x, cfg.k)
                               : mediant_sequence(alpha, x, cfg.k);
    const std::string fmt = pick_format(cfg, "csv");
    if (fmt == "csv")
        write_output(cfg.output, stream_csv(meta, s));
    else if (fmt == "json")
        write_output(cfg.output, json_text(stream_json(meta, s)));
    else
        bad_format(fmt, "mediants");
    return 0;
}

int cmd_farey_orbit(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const ExactReal x = ExactReal::parse(cfg.x, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha, &x}, prec)};
    std::vector<ExactReal> orbit{x};
    for (std::size_t i = 0; i < cfg.n; ++i) {
        if (cfg.flat)
            orbit.push_back(flat_step(alpha, orbit.back()).value);
        else
            orbit.push_back(alpha_farey_step(alpha, orbit.back()));
    }
    const std::string fmt = pick_format(cfg, "csv");
    if (fmt == "csv")
        write_output(cfg.output, orbit_csv(meta, orbit));
    else if (fmt == "json")
        write_output(cfg.output, json_text(orbit_json(meta, orbit)));
    else
        bad_format(fmt, "farey-orbit");
    return 0;
}

int cmd_domain(const Cfg& cfg, long prec, bool alpha_given, bool points_given) {
    std::string system = cfg.system;
    std::string alpha_text = cfg.alpha;
    std::size_t points = cfg.points;
    if (cfg.figure > 0) {
        // figure presets: the published windows at alpha = sqrt(2)-1 show
        // the invariant domain, the transit ladder and the flattened body
        static const char* kFigureSystems[8] = {"omega-star", "omega-star", "v", "v",
                                                "v",          "vflat",      "vflat", "vflat"};
        system = kFigureSystems[cfg.figure - 1];
        if (!alpha_given) alpha_text = "sqrt2-1";
        if (!points_given) points = 20000;
    }
    const ExactReal alpha = parse_alpha(alpha_text, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha}, prec)};
    DomainCloud cloud;
    if (points == 0) {
        cloud.alpha = alpha;
        cloud.system = parse_system(system);
        cloud.seed = cfg.seed;
    } else {
        cloud = sample_domain(alpha, parse_system(system), points, cfg.seed);
    }
    const std::string fmt = pick_format(cfg, "csv");
    if (fmt == "csv")
        write_output(cfg.output, cloud_csv(meta, cloud));
    else if (fmt == "json")
        write_output(cfg.output, json_text(cloud_json(meta, cloud)));
    else if (fmt == "svg")
        write_output(cfg.output, cloud_svg(meta, cloud));
    else
        bad_format(fmt, "domain");
    return 0;
}

int cmd_measure(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha}, prec)};
    std::ostringstream what;
    what << "box [" << double_text(cfg.x1) << "," << double_text(cfg.x2) << "]x["
         << double_text(cfg.y1) << "," << double_text(cfg.y2) << "]";
    MeasureEstimate est;
    if (cfg.samples == 0) {
        est = {rectangle_mass(cfg.x1, cfg.x2, cfg.y1, cfg.y2), 0};
        what << " closed-form";
    } else {
        PlanarRegion region{{cfg.x1, cfg.x2, cfg.y1, cfg.y2},
                            [](double, double) { return true; }};
        est = measure_estimate(alpha, region, cfg.samples, cfg.seed);
        what << " mc";
    }
    const std::string fmt = pick_format(cfg, "json");
    if (fmt != "json") bad_format(fmt, "measure");
    write_output(cfg.output, json_text(measure_json(meta, what.str(), est)));
    return 0;
}

int cmd_normality(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const ExactReal x = ExactReal::parse(cfg.x, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha, &x}, prec)};
    std::vector<CylinderSpec> return_specs, plain_specs;
    for (const std::string& s : cfg.specs) {
        CylinderSpec spec = parse_spec(s);
        // the report covers the first-return coding; other families
        // get a straight Birkhoff frequency instead
        if (spec.family == CylinderFamily::Flat1)
            return_specs.push_back(spec);
        else
            plain_specs.push_back(spec);
    }
    NormalityReport rep = farey_normality_report(alpha, x, return_specs, cfg.norm_n, cfg.seed);
    json out = normality_json(meta, rep);
    if (!plain_specs.empty()) {
        json freqs = json::array();
        for (const CylinderSpec& spec : plain_specs) {
            FrequencyResult f = cylinder_frequency(alpha, x, spec, cfg.norm_n);
            freqs.push_back(json{{"spec", spec_text(spec)},
                                 {"freq", f.freq},
                                 {"count", f.count},
                                 {"windows", f.windows}});
        }
        out["frequencies"] = freqs;
    }
    const std::string fmt = pick_format(cfg, "json");
    if (fmt != "json") bad_format(fmt, "normality");
    write_output(cfg.output, json_text(out));
    return 0;
}

int cmd_matching(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha}, prec)};
    auto m = matching_detect(alpha, cfg.max_steps, cfg.tail);
    const std::string fmt = pick_format(cfg, "json");
    if (fmt != "json") bad_format(fmt, "matching");
    write_output(cfg.output, json_text(matching_json(meta, cfg.max_steps, m)));
    return 0;
}

int cmd_thin(const Cfg& cfg, long prec) {
    const ExactReal alpha = parse_alpha(cfg.alpha, prec);
    const RunMeta meta{alpha, cfg.seed, used_precision({&alpha}, prec)};
    const std::string fmt = pick_format(cfg, "json");
    if (fmt != "json") bad_format(fmt, "thin-cylinder");
    if (!cfg.word.empty()) {
        ThinCylinder cert = cylinder_certificate(alpha, parse_word(cfg.word));
        write_output(cfg.output, json_text(thin_json(meta, ExactReal(0L), 0, cert)));
        return 0;
    }
    if (cfg.eps.empty()) throw ParseError("thin-cylinder needs --eps or --word");
    const ExactReal eps = ExactReal::parse(cfg.eps, prec);
    auto t = thin_cylinder_search(alpha, eps, cfg.max_len, cfg.seed);
    write_output(cfg.output, json_text(thin_json(meta, eps, cfg.max_len, t)));
    return 0;
}

int cmd_verify(const Cfg& cfg, long prec) {
    VerifyOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    if (!cfg.alpha.empty()) opt.alpha = parse_alpha(cfg.alpha, prec);
    std::vector<CheckResult> results;
    if (cfg.check == "all")
        results = run_all_checks(opt);
    else
        results.push_back(run_check(cfg.check, opt));
    int failures = 0;
    std::ostringstream human;
    json checks = json::array();
    for (const CheckResult& r : results) {
        human << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
        checks.push_back(json{{"name", r.name},
                              {"pass", r.pass},
                              {"seconds", r.seconds},
                              {"detail", r.detail}});
        if (!r.pass) ++failures;
    }
    std::cout << human.str();
    if (!cfg.output.empty()) {
        json report{{"tool", kToolName},
                    {"version", kToolVersion},
                    {"seed", cfg.seed},
                    {"samples", cfg.samples},
                    {"failures", failures},
                    {"checks", checks}};
        write_output(cfg.output, json_text(report));
    }
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha continued fractions, mediant streams and planar domains"};
    app.require_subcommand(1);
    Cfg cfg;

    auto add_common = [&](CLI::App* cmd, bool needs_alpha) {
        auto* a = cmd->add_option("--alpha", cfg.alpha,
                                  "parameter: p/q, sqrt2-1, (a+b*sqrt(d))/c, or decimal");
        if (needs_alpha) a->required();
        cmd->add_option("--seed", cfg.seed, "rng seed recorded in the output");
        cmd->add_option("--precision", cfg.precision, "float precision in bits")
            ->check(CLI::Range(static_cast<long>(kMinFloatPrec), static_cast<long>(kMaxFloatPrec)));
        cmd->add_option("--format", cfg.format, "csv, json or svg");
        cmd->add_option("--output", cfg.output, "output file (default stdout)");
    };

    auto* expand = app.add_subcommand("expand", "digit expansion with convergents");
    add_common(expand, true);
    expand->add_option("--x", cfg.x, "starting point")->required();
    expand->add_option("--n", cfg.n, "maximum digits");
    expand->add_flag("--rcf", cfg.rcf, "regular continued fraction instead");

    auto* mediants = app.add_subcommand("mediants", "convergent and mediant stream");
    add_common(mediants, true);
    mediants->add_option("--x", cfg.x, "starting point")->required();
    mediants->add_option("--k", cfg.k, "stream entries");
    mediants->add_flag("--flat", cfg.flat, "flattened stream");

    auto* forbit = app.add_subcommand("farey-orbit", "orbit of the slow map");
    add_common(forbit, true);
    forbit->add_option("--x", cfg.x, "starting point")->required();
    forbit->add_option("--n", cfg.n, "steps");
    forbit->add_flag("--flat", cfg.flat, "flattened slow map");

    auto* domain = app.add_subcommand("domain", "planar domain cloud");
    add_common(domain, false);
    domain->add_option("--system", cfg.system, "omega-star, v or vflat");
    auto* points_opt = domain->add_option("--points", cfg.points, "cloud size");
    domain->add_option("--figure", cfg.figure, "preset window 1..8")->check(CLI::Range(1, 8));

    auto* measure = app.add_subcommand("measure", "kernel mass of a box");
    add_common(measure, true);
    measure->add_option("--x1", cfg.x1, "left edge");
    measure->add_option("--x2", cfg.x2, "right edge");
    measure->add_option("--y1", cfg.y1, "bottom edge (default -inf)");
    measure->add_option("--y2", cfg.y2, "top edge");
    measure->add_option("--samples", cfg.samples, "monte carlo samples (0 = closed form)");

    auto* normality = app.add_subcommand("normality", "digit frequency report");
    add_common(normality, true);
    normality->add_option("--x", cfg.x, "starting point")->required();
    normality->add_option("--n", cfg.norm_n, "orbit steps");
    normality->add_option("--spec", cfg.specs, "pattern family:items, repeatable");

    auto* matching = app.add_subcommand("matching", "endpoint orbit matching");
    add_common(matching, true);
    matching->add_option("--max-steps", cfg.max_steps, "search budget");
    matching->add_option("--tail", cfg.tail, "tail digits to confirm");

    auto* thin = app.add_subcommand("thin-cylinder", "short-image cylinder search");
    add_common(thin, true);
    thin->add_option("--eps", cfg.eps, "image length target");
    thin->add_option("--max-len", cfg.max_len, "word length budget");
    thin->add_option("--word", cfg.word, "certify this word instead ('.'-separated digits)");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify, false);
    verify->add_option("check", cfg.check, "suite name or 'all'");
    verify->add_option("--samples", cfg.samples, "override per-suite budgets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // decimal inputs retry at doubled precision until the tie clears
    long prec = cfg.precision;
    for (;;) {
        try {
            if (*expand) return cmd_expand(cfg, prec);
            if (*mediants) return cmd_mediants(cfg, prec);
            if (*forbit) return cmd_farey_orbit(cfg, prec);
            if (*domain)
                return cmd_domain(cfg, prec, domain->count("--alpha") > 0,
                                  points_opt->count() > 0);
            if (*measure) return cmd_measure(cfg, prec);
            if (*normality) return cmd_normality(cfg, prec);
            if (*matching) return cmd_matching(cfg, prec);
            if (*thin) return cmd_thin(cfg, prec);
            if (*verify) return cmd_verify(cfg, prec);
            return 2;
        } catch (const PrecisionError& e) {
            if (prec >= kMaxFloatPrec) {
                std::cerr << "precision error: " << e.what() << "\n";
                return 3;
            }
            prec = std::min<long>(kMaxFloatPrec, 2 * prec);
            std::cerr << "retrying at " << prec << " bits\n";
        } catch (const IoError& e) {
            std::cerr << "io error: " << e.what() << "\n";
            return 4;
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
}
