#include <afy/serialize.hpp>

#include <afy/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace afy {

namespace {

using nlohmann::json;

std::string mpz_text(const mpz_class& z) { return z.get_str(); }

double approx(const ExactReal& v) { return v.to_double(); }

json interval_json(const ExactReal& lo, const ExactReal& hi) {
    return json::array({lo.str(), hi.str()});
}

}  // namespace

std::string text_header(const RunMeta& meta) {
    std::ostringstream out;
    out << "# " << kToolName << " v" << kToolVersion << " alpha=" << meta.alpha.str()
        << " seed=" << meta.seed << " precision=" << meta.precision << "\n";
    return out.str();
}

json meta_json(const RunMeta& meta) {
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"alpha", meta.alpha.str()},
                {"seed", meta.seed},
                {"precision", meta.precision}};
}

std::string double_text(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    // shortest fixed form that parses back to the same double
    char buf[64];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::string extended_text(const ExtendedValue& y) {
    if (y.is_neg_infinity()) return "-inf";
    return double_text(approx(y.finite()));
}

std::string kind_text(EntryKind k) {
    switch (k) {
        case EntryKind::Principal: return "principal";
        case EntryKind::Mediant: return "mediant";
        case EntryKind::Terminal: return "terminal";
    }
    throw PreconditionError("unknown entry kind");
}

std::string region_text(RegionKind k) {
    switch (k) {
        case RegionKind::OmegaStar: return "omega-star";
        case RegionKind::UpsilonInv: return "upsilon-inv";
        case RegionKind::VFlatMinus: return "vflat-minus";
        case RegionKind::VFlatPlus: return "vflat-plus";
        case RegionKind::D1: return "d1";
        case RegionKind::D2: return "d2";
    }
    throw PreconditionError("unknown region kind");
}

std::string system_text(PlanarSystem s) {
    switch (s) {
        case PlanarSystem::OmegaStar: return "omega-star";
        case PlanarSystem::V: return "v";
        case PlanarSystem::VFlat: return "vflat";
    }
    throw PreconditionError("unknown planar system");
}

std::string family_text(CylinderFamily f) {
    switch (f) {
        case CylinderFamily::AlphaCF: return "alpha-cf";
        case CylinderFamily::Flat1: return "flat1";
        case CylinderFamily::Flat2: return "flat2";
        case CylinderFamily::GaussPlanar: return "gauss-planar";
    }
    throw PreconditionError("unknown cylinder family");
}

std::string symbol_text(const DeltaSymbol& s) {
    char c = s.cls == DeltaClass::Minus ? 'm' : s.cls == DeltaClass::Plus ? 'p' : 'z';
    return c + s.k.get_str();
}

std::string spec_text(const CylinderSpec& spec) {
    std::ostringstream out;
    out << family_text(spec.family) << ":";
    const bool symbolic =
        spec.family == CylinderFamily::Flat1 || spec.family == CylinderFamily::Flat2;
    bool first = true;
    if (symbolic) {
        for (const DeltaSymbol& s : spec.symbols) {
            if (!first) out << ".";
            out << symbol_text(s);
            first = false;
        }
    } else {
        for (const mpz_class& d : spec.digits) {
            if (!first) out << ".";
            out << mpz_text(d);
            first = false;
        }
    }
    if (spec.family == CylinderFamily::GaussPlanar) out << "@" << spec.window_lo;
    return out.str();
}

json expansion_json(const RunMeta& meta, const AlphaExpansion& e) {
    json digits = json::array();
    for (std::size_t i = 0; i < e.digits.size(); ++i)
        digits.push_back(json::array({e.eps[i], mpz_text(e.digits[i])}));
    json convergents = json::array();
    for (const auto& [p, q] : e.convergents)
        convergents.push_back(json::array({mpz_text(p), mpz_text(q)}));
    json orbit = json::array();
    for (const ExactReal& v : e.orbit) orbit.push_back(v.str());
    return json{{"meta", meta_json(meta)},
                {"alpha", e.alpha.str()},
                {"x", e.x.str()},
                {"digits", digits},
                {"convergents", convergents},
                {"orbit", orbit},
                {"terminated", e.terminated}};
}

std::string expansion_csv(const RunMeta& meta, const AlphaExpansion& e) {
    std::ostringstream out;
    out << text_header(meta);
    out << "n,eps,a,p,q,x\n";
    for (std::size_t i = 0; i < e.digits.size(); ++i) {
        out << (i + 1) << "," << e.eps[i] << "," << mpz_text(e.digits[i]) << ","
            << mpz_text(e.convergents[i].first) << "," << mpz_text(e.convergents[i].second)
            << ",";
        if (i + 1 < e.orbit.size()) out << e.orbit[i + 1].str();
        out << "\n";
    }
    return out.str();
}

json stream_json(const RunMeta& meta, const MediantStream& s) {
    json entries = json::array();
    for (const StreamEntry& en : s.entries)
        entries.push_back(json{{"k", en.k},
                               {"p", mpz_text(en.p)},
                               {"q", mpz_text(en.q)},
                               {"kind", kind_text(en.kind)},
                               {"n", en.n},
                               {"ell", en.ell}});
    return json{{"meta", meta_json(meta)},
                {"alpha", s.alpha.str()},
                {"x", s.x.str()},
                {"entries", entries}};
}

std::string stream_csv(const RunMeta& meta, const MediantStream& s) {
    std::ostringstream out;
    out << text_header(meta);
    out << "k,p,q,kind,n,ell\n";
    for (const StreamEntry& en : s.entries)
        out << en.k << "," << mpz_text(en.p) << "," << mpz_text(en.q) << ","
            << kind_text(en.kind) << "," << en.n << "," << en.ell << "\n";
    return out.str();
}

json orbit_json(const RunMeta& meta, const std::vector<ExactReal>& xs) {
    json orbit = json::array();
    for (const ExactReal& v : xs) orbit.push_back(v.str());
    return json{{"meta", meta_json(meta)}, {"orbit", orbit}};
}

std::string orbit_csv(const RunMeta& meta, const std::vector<ExactReal>& xs) {
    std::ostringstream out;
    out << text_header(meta);
    out << "n,x\n";
    for (std::size_t i = 0; i < xs.size(); ++i) out << i << "," << xs[i].str() << "\n";
    return out.str();
}

json cloud_json(const RunMeta& meta, const DomainCloud& c) {
    json points = json::array();
    for (const TaggedPlanarPoint& tp : c.points) {
        json p{{"x", approx(tp.point.x)}, {"tag", region_text(tp.tag.kind)}};
        if (tp.point.y.is_neg_infinity())
            p["y"] = "-inf";
        else
            p["y"] = approx(tp.point.y.finite());
        if (tp.tag.kind == RegionKind::UpsilonInv) p["j"] = tp.tag.j.get_si();
        points.push_back(std::move(p));
    }
    return json{{"meta", meta_json(meta)},
                {"alpha", c.alpha.str()},
                {"system", system_text(c.system)},
                {"orbit_length", c.orbit_length},
                {"points", points}};
}

std::string cloud_csv(const RunMeta& meta, const DomainCloud& c) {
    std::ostringstream out;
    out << text_header(meta);
    out << "x,y,tag\n";
    for (const TaggedPlanarPoint& tp : c.points)
        out << double_text(approx(tp.point.x)) << "," << extended_text(tp.point.y) << ","
            << region_text(tp.tag.kind) << "\n";
    return out.str();
}

namespace {

struct SvgFrame {
    double x_lo, x_hi, y_lo, y_hi;
    static constexpr double kW = 840, kH = 640, kMargin = 60;

    double px(double x) const {
        return kMargin + (x - x_lo) / (x_hi - x_lo) * (kW - 2 * kMargin);
    }
    double py(double y) const {
        return kH - kMargin - (y - y_lo) / (y_hi - y_lo) * (kH - 2 * kMargin);
    }
};

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* region_color(RegionKind k) {
    switch (k) {
        case RegionKind::OmegaStar: return "#2b6cb0";
        case RegionKind::UpsilonInv: return "#c05621";
        case RegionKind::VFlatMinus: return "#2f855a";
        case RegionKind::VFlatPlus: return "#6b46c1";
        case RegionKind::D1: return "#b83280";
        case RegionKind::D2: return "#718096";
    }
    return "#000000";
}

}  // namespace

std::string cloud_svg(const RunMeta& meta, const DomainCloud& c) {
    // frame around the finite points, 4% padding each side
    double x_lo = 0, x_hi = 1, y_lo = -2, y_hi = 0;
    bool any = false;
    std::size_t skipped = 0;
    for (const TaggedPlanarPoint& tp : c.points) {
        if (tp.point.y.is_neg_infinity()) {
            ++skipped;
            continue;
        }
        const double x = approx(tp.point.x);
        const double y = approx(tp.point.y.finite());
        if (!any) {
            x_lo = x_hi = x;
            y_lo = y_hi = y;
            any = true;
        } else {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (!any || x_hi - x_lo < 1e-9) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (!any || y_hi - y_lo < 1e-9) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double xpad = 0.04 * (x_hi - x_lo), ypad = 0.04 * (y_hi - y_lo);
    SvgFrame f{x_lo - xpad, x_hi + xpad, y_lo - ypad, y_hi + ypad};

    const double alpha = approx(c.alpha);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    // vertical references: the interval ends, the fold point, the origin;
    // horizontal references: -1, -2 and the golden strip -phi, -phi-1
    struct Mark {
        double v;
        const char* label;
    };
    const Mark x_marks[] = {{alpha - 1, "a-1"}, {(alpha - 1) / 2, "(a-1)/2"}, {0, "0"}, {alpha, "a"}};
    const Mark y_marks[] = {{-1, "-1"}, {-2, "-2"}, {-phi, "-phi"}, {-phi - 1, "-phi-1"}};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << SvgFrame::kW
        << "\" height=\"" << SvgFrame::kH << "\" viewBox=\"0 0 " << SvgFrame::kW << " "
        << SvgFrame::kH << "\">\n";
    out << "<!-- " << kToolName << " v" << kToolVersion << " alpha=" << c.alpha.str()
        << " seed=" << meta.seed << " precision=" << meta.precision
        << " system=" << system_text(c.system) << " points=" << c.points.size()
        << " skipped=" << skipped << " -->\n";
    out << "<title>" << system_text(c.system) << " cloud, alpha=" << c.alpha.str()
        << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << SvgFrame::kW << "\" height=\"" << SvgFrame::kH
        << "\" fill=\"#ffffff\"/>\n";
    out << "<rect x=\"" << fixed2(SvgFrame::kMargin) << "\" y=\"" << fixed2(SvgFrame::kMargin)
        << "\" width=\"" << fixed2(SvgFrame::kW - 2 * SvgFrame::kMargin) << "\" height=\""
        << fixed2(SvgFrame::kH - 2 * SvgFrame::kMargin)
        << "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>\n";

    for (const Mark& m : x_marks) {
        if (m.v < f.x_lo || m.v > f.x_hi) continue;
        const double px = f.px(m.v);
        out << "<line x1=\"" << fixed2(px) << "\" y1=\"" << fixed2(SvgFrame::kMargin)
            << "\" x2=\"" << fixed2(px) << "\" y2=\"" << fixed2(SvgFrame::kH - SvgFrame::kMargin)
            << "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\" stroke-dasharray=\"4 3\"/>\n";
        out << "<text x=\"" << fixed2(px + 3) << "\" y=\"" << fixed2(SvgFrame::kMargin - 6)
            << "\" font-size=\"11\" font-family=\"monospace\" fill=\"#555555\">" << m.label
            << "</text>\n";
    }
    for (const Mark& m : y_marks) {
        if (m.v < f.y_lo || m.v > f.y_hi) continue;
        const double py = f.py(m.v);
        out << "<line x1=\"" << fixed2(SvgFrame::kMargin) << "\" y1=\"" << fixed2(py)
            << "\" x2=\"" << fixed2(SvgFrame::kW - SvgFrame::kMargin) << "\" y2=\"" << fixed2(py)
            << "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\" stroke-dasharray=\"4 3\"/>\n";
        out << "<text x=\"" << fixed2(SvgFrame::kW - SvgFrame::kMargin + 4) << "\" y=\""
            << fixed2(py + 4) << "\" font-size=\"11\" font-family=\"monospace\" fill=\"#555555\">"
            << m.label << "</text>\n";
    }

    for (const TaggedPlanarPoint& tp : c.points) {
        if (tp.point.y.is_neg_infinity()) continue;
        out << "<circle cx=\"" << fixed2(f.px(approx(tp.point.x))) << "\" cy=\""
            << fixed2(f.py(approx(tp.point.y.finite()))) << "\" r=\"1.2\" fill=\""
            << region_color(tp.tag.kind) << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

json measure_json(const RunMeta& meta, const std::string& what, const MeasureEstimate& est) {
    return json{{"meta", meta_json(meta)},
                {"what", what},
                {"value", est.value},
                {"std_error", est.std_error}};
}

json normality_json(const RunMeta& meta, const NormalityReport& rep) {
    json specs = json::array();
    for (const SpecReport& sr : rep.specs)
        specs.push_back(json{{"spec", spec_text(sr.spec)},
                             {"freq", sr.freq},
                             {"mu_estimate", sr.mu_estimate},
                             {"stderr", sr.std_error},
                             {"verdict", sr.consistent ? "consistent" : "inconsistent"}});
    return json{{"meta", meta_json(meta)},
                {"alpha", meta.alpha.str()},
                {"n", rep.steps},
                {"stretches", rep.stretches},
                {"n1_fraction", rep.n1_fraction},
                {"n2_fraction", rep.n2_fraction},
                {"n2_mu_estimate", rep.n2_mu_estimate},
                {"n2_stderr", rep.n2_std_error},
                {"n2_verdict", rep.n2_consistent ? "consistent" : "inconsistent"},
                {"specs", specs}};
}

json matching_json(const RunMeta& meta, std::size_t max_steps,
                   const std::optional<MatchingResult>& m) {
    json j{{"meta", meta_json(meta)},
           {"alpha", meta.alpha.str()},
           {"max_steps", max_steps},
           {"found", m.has_value()}};
    if (m) {
        j["m0"] = m->alpha_steps;
        j["n0"] = m->alpha_minus_one_steps;
        j["tail_len"] = m->tail_checked;
    } else {
        j["m0"] = nullptr;
        j["n0"] = nullptr;
        j["tail_len"] = nullptr;
    }
    return j;
}

json thin_json(const RunMeta& meta, const ExactReal& eps, std::size_t max_len,
               const std::optional<ThinCylinder>& t) {
    json j{{"meta", meta_json(meta)},
           {"alpha", meta.alpha.str()},
           {"eps", eps.str()},
           {"max_len", max_len},
           {"found", t.has_value()}};
    if (t) {
        json word = json::array();
        for (const mpz_class& d : t->word) word.push_back(mpz_text(d));
        j["word"] = word;
        j["cylinder_interval"] = interval_json(t->cylinder_lo, t->cylinder_hi);
        j["image_interval"] = interval_json(t->image_lo, t->image_hi);
        j["length"] = approx(t->image_hi - t->image_lo);
    } else {
        j["word"] = nullptr;
        j["cylinder_interval"] = nullptr;
        j["image_interval"] = nullptr;
        j["length"] = nullptr;
    }
    return j;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace afy
