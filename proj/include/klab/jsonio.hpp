// JSON encodings: field elements as integers (m = 1) or little-endian arrays
// (m > 1), matrices as flat row-major entry lists, and the model file format
// with its version gate.
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "klab/errors.hpp"
#include "klab/field.hpp"
#include "klab/linalg.hpp"
#include "klab/models.hpp"

namespace klab {

using Json = nlohmann::ordered_json;

inline Json fel_to_json(const Field& F, const Fel& a) {
    if (F.m() == 1) return a[0];
    Json arr = Json::array();
    for (Limb c : a) arr.push_back(c);
    return arr;
}

inline Fel fel_from_json(const Field& F, const Json& j) {
    Fel out(F.m(), 0);
    if (j.is_number_unsigned() || j.is_number_integer()) {
        out[0] = j.get<std::uint64_t>() % F.p();
        return out;
    }
    if (!j.is_array() || j.size() != F.m()) throw MalformedFile("field element has wrong shape");
    for (std::size_t i = 0; i < F.m(); ++i) out[i] = j[i].get<std::uint64_t>() % F.p();
    return out;
}

inline Json fieldspec_to_json(const FieldSpec& spec) {
    Json j;
    j["p"] = spec.p;
    j["m"] = spec.m;
    j["min_poly"] = spec.min_poly;
    return j;
}

inline FieldSpec fieldspec_from_json(const Json& j) {
    FieldSpec spec;
    try {
        spec.p = j.at("p").get<std::uint64_t>();
        spec.m = j.at("m").get<std::uint32_t>();
        if (j.contains("min_poly")) spec.min_poly = j.at("min_poly").get<std::vector<Limb>>();
    } catch (const Json::exception& e) {
        throw MalformedFile(std::string("bad field spec: ") + e.what());
    }
    return spec;
}

inline Json mat_to_json(const Mat& m) {
    const Field& F = *m.field();
    Json j;
    j["nrows"] = m.nrows();
    j["ncols"] = m.ncols();
    Json entries = Json::array();
    for (std::size_t i = 0; i < m.nrows(); ++i)
        for (std::size_t c = 0; c < m.ncols(); ++c) entries.push_back(fel_to_json(F, m.get(i, c)));
    j["entries"] = std::move(entries);
    return j;
}

inline Mat mat_from_json(FieldPtr F, const Json& j) {
    try {
        std::size_t nr = j.at("nrows").get<std::size_t>();
        std::size_t nc = j.at("ncols").get<std::size_t>();
        const Json& entries = j.at("entries");
        if (!entries.is_array() || entries.size() != nr * nc) throw MalformedFile("entry count mismatch");
        Mat m(F, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t c = 0; c < nc; ++c) m.set(i, c, fel_from_json(*F, entries[i * nc + c]));
        return m;
    } catch (const Json::exception& e) {
        throw MalformedFile(std::string("bad matrix: ") + e.what());
    }
}

inline constexpr int kModelFormatVersion = 1;

inline Json model_to_json(const CanonicalModel& cm) {
    const Field& F = *cm.pres.F;
    Json j;
    j["version"] = kModelFormatVersion;
    j["field"] = fieldspec_to_json(F.spec());
    j["n"] = cm.pres.n;
    Json vars = Json::array();
    for (int v = 0; v < cm.pres.n; ++v) vars.push_back("x" + std::to_string(v));
    j["variables"] = std::move(vars);
    j["monomial_order"] = "grlex";
    Json gens = Json::array();
    for (const Generator& g : cm.pres.generators) {
        Json jg;
        jg["degree"] = g.degree;
        Json coeffs = Json::array();
        for (std::size_t c = 0; c < g.coeffs.ncols(); ++c) coeffs.push_back(fel_to_json(F, g.coeffs.get(0, c)));
        jg["coeffs"] = std::move(coeffs);
        gens.push_back(std::move(jg));
    }
    j["generators"] = std::move(gens);
    Json points = Json::array();
    if (cm.eval) {
        for (std::size_t i = 0; i < cm.eval->points.nrows(); ++i) {
            Json pt = Json::array();
            for (std::size_t c = 0; c < cm.eval->points.ncols(); ++c)
                pt.push_back(fel_to_json(F, cm.eval->points.get(i, c)));
            points.push_back(std::move(pt));
        }
    }
    j["points"] = std::move(points);
    Json eh = Json::object();
    for (auto& [q, d] : cm.pres.expected_hilbert) eh[std::to_string(q)] = d;
    j["expected_hilbert"] = std::move(eh);
    Json meta;
    meta["construction"] = cm.construction;
    meta["seed"] = cm.seed;
    meta["genus"] = cm.genus;
    meta["surface"] = cm.surface;
    if (cm.sextic) {
        Json s;
        s["f"] = mat_to_json(cm.sextic->f);
        s["nodes"] = mat_to_json(cm.sextic->nodes);
        s["adjoints"] = mat_to_json(cm.sextic->adjoints);
        meta["sextic"] = std::move(s);
    }
    if (cm.k3) {
        Json s;
        s["param"] = mat_to_json(cm.k3->param);
        s["lker"] = mat_to_json(cm.k3->lker);
        s["extra_quadric"] = mat_to_json(cm.k3->extra_quadric);
        meta["k3_section"] = std::move(s);
    }
    j["meta"] = std::move(meta);
    return j;
}

inline CanonicalModel model_from_json(const Json& j) {
    if (!j.contains("version")) throw MalformedFile("model file lacks a version field");
    if (j.at("version").get<int>() != kModelFormatVersion)
        throw FormatVersionMismatch("unsupported model format version");
    FieldPtr F = std::make_shared<Field>(fieldspec_from_json(j.at("field")));
    CanonicalModel cm;
    try {
        PresentationModel pm;
        pm.F = F;
        pm.n = j.at("n").get<int>();
        for (const Json& jg : j.at("generators")) {
            Generator g;
            g.degree = jg.at("degree").get<int>();
            const Json& coeffs = jg.at("coeffs");
            g.coeffs = Mat(F, 1, coeffs.size());
            for (std::size_t c = 0; c < coeffs.size(); ++c) g.coeffs.set(0, c, fel_from_json(*F, coeffs[c]));
            pm.generators.push_back(std::move(g));
        }
        if (j.contains("expected_hilbert"))
            for (auto& [k, v] : j.at("expected_hilbert").items())
                pm.expected_hilbert[std::stoi(k)] = v.get<std::size_t>();
        pm.validate();
        cm.pres = std::move(pm);
        if (j.contains("points") && !j.at("points").empty()) {
            std::vector<Mat> pts;
            for (const Json& jp : j.at("points")) {
                Mat pt(F, 1, jp.size());
                for (std::size_t c = 0; c < jp.size(); ++c) pt.set(0, c, fel_from_json(*F, jp[c]));
                pts.push_back(std::move(pt));
            }
            cm.eval = EvaluationModel::make(F, pts, cm.pres.n, cm.pres.expected_hilbert);
        }
        const Json& meta = j.at("meta");
        cm.construction = meta.value("construction", std::string{});
        cm.seed = meta.value("seed", std::uint64_t{0});
        cm.genus = meta.value("genus", 0);
        cm.surface = meta.value("surface", false);
        if (meta.contains("sextic")) {
            NodalSexticModel sm;
            sm.F = F;
            sm.f = mat_from_json(F, meta.at("sextic").at("f"));
            sm.nodes = mat_from_json(F, meta.at("sextic").at("nodes"));
            sm.adjoints = mat_from_json(F, meta.at("sextic").at("adjoints"));
            cm.sextic = std::move(sm);
        }
        if (meta.contains("k3_section")) {
            K3SectionData sd;
            sd.param = mat_from_json(F, meta.at("k3_section").at("param"));
            sd.lker = mat_from_json(F, meta.at("k3_section").at("lker"));
            sd.extra_quadric = mat_from_json(F, meta.at("k3_section").at("extra_quadric"));
            cm.k3 = std::move(sd);
        }
    } catch (const Json::exception& e) {
        throw MalformedFile(std::string("bad model file: ") + e.what());
    }
    return cm;
}

inline void save_model(const std::string& path, const CanonicalModel& cm) {
    std::ofstream out(path);
    if (!out) throw MalformedFile("cannot open " + path + " for writing");
    out << model_to_json(cm).dump(2) << '\n';
}

inline CanonicalModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedFile("cannot open model file " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw MalformedFile(std::string("invalid JSON: ") + e.what());
    }
    return model_from_json(j);
}

} // namespace klab
