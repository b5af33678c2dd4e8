#include "zrs/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace zrs {

namespace {

using nlohmann::json;


json number(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? json("inf") : json("nan");
}

json series_json(const SeriesDiagnostic& d) {
    return {{"slope", number(d.slope)},
            {"sufficient_data", d.sufficient_data},
            {"converging", d.converging}};
}

}  // namespace

ScattererSet scatterers_from_json(const json& doc) {
    try {
        if (!doc.is_object()) throw BadParams("configuration must be a JSON object");
        if (doc.contains("family")) {
            const json& f = doc.at("family");
            FamilySpec spec;
            spec.kind = parse_family_kind(f.at("kind").get<std::string>());
            if (f.contains("params"))
                for (const auto& [k, v] : f.at("params").items()) spec.params[k] = v.get<double>();
            spec.n = f.at("n").get<std::size_t>();
            spec.strict = f.value("strict", false);
            return generate_family(spec);
        }
        std::vector<Vec3> points;
        for (const auto& p : doc.at("points")) {
            if (!p.is_array() || p.size() != 3) throw BadParams("each point needs three coordinates");
            points.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
        }
        auto weights = doc.at("weights").get<std::vector<double>>();
        const double eps = doc.value("epsilon", default_duplicate_epsilon);
        return ScattererSet::create(std::move(points), std::move(weights), eps);
    } catch (const json::exception& e) {
        throw BadParams(std::string("malformed configuration: ") + e.what());
    }
}

json load_json_source(const std::string& source) {
    const auto first = source.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && source[first] == '{') return json::parse(source);
        std::ifstream in(source);
        if (!in) throw BadParams("cannot open configuration '" + source + "'");
        return json::parse(in);
    } catch (const json::exception& e) {
        throw BadParams(std::string("malformed JSON: ") + e.what());
    }
}

ScattererSet load_scatterers(const std::string& source) {
    return scatterers_from_json(load_json_source(source));
}

json to_json(const AdmissibilityReport& r) {
    json tail = json::array();
    for (double t : r.tail) tail.push_back(number(t));
    json decay = json::array();
    for (const auto& d : r.tail_decay)
        decay.push_back({{"n", d.n},
                         {"m_sampled", number(d.m_sampled)},
                         {"tau", number(d.tau)},
                         {"product", number(d.product)}});
    json verdict = {{"k0_finite", r.verdict.k0_finite},
                    {"k1_finite", r.verdict.k1_finite},
                    {"tail_contractive", r.verdict.tail_contractive},
                    {"borderline", r.verdict.borderline},
                    {"pass", r.verdict.pass}};
    verdict["tail_decay"] = r.verdict.tail_decay ? json(*r.verdict.tail_decay) : json(nullptr);
    return {{"n", r.n},
            {"K0", number(r.K0)},
            {"K1", number(r.K1)},
            {"tail", tail},
            {"b", number(r.b)},
            {"n0", r.n0},
            {"p_tail", number(r.p_tail)},
            {"p_tail_estimate", number(r.p_tail_estimate)},
            {"k0_series", series_json(r.k0_series)},
            {"k1_series", series_json(r.k1_series)},
            {"tail_decay", decay},
            {"verdict", verdict}};
}

}  // namespace zrs
