#include "steerdist/io.hpp"

#include <fstream>

#include "steerdist/errors.hpp"

namespace steerdist {

using nlohmann::json;

json to_json(const Assemblage& asm_) {
    json doc;
    doc["scenario"] = std::string(scenario_name(asm_.scenario()));
    if (asm_.theta()) {
        doc["theta"] = *asm_.theta();
    }
    doc["element_dim"] = asm_.element_dim();
    json elements = json::array();
    const auto elems = asm_.elements();
    for (std::size_t k = 0; k < elems.size(); ++k) {
        json e;
        if (asm_.scenario() == Scenario::OneSided) {
            e["a"] = k % 2;
            e["x"] = k / 2;
        } else {
            e["a"] = (k / 2) % 2;
            e["b"] = k % 2;
            e["x"] = k / 4 / 3;
            e["y"] = k / 4 % 3;
        }
        json data = json::array();
        const auto& m = elems[k].matrix();
        for (int i = 0; i < m.dim(); ++i) {
            for (int j = 0; j < m.dim(); ++j) {
                data.push_back({m(i, j).real(), m(i, j).imag()});
            }
        }
        e["data"] = std::move(data);
        elements.push_back(std::move(e));
    }
    doc["elements"] = std::move(elements);
    return doc;
}

namespace {

int index_field(const json& e, const char* key, int limit) {
    if (!e.contains(key) || !e[key].is_number_integer()) {
        throw Error(ErrorCode::Parse, std::string("element is missing integer field '") + key + "'");
    }
    const int v = e[key].get<int>();
    if (v < 0 || v >= limit) {
        throw Error(ErrorCode::Parse, std::string("field '") + key + "' out of range");
    }
    return v;
}

}  // namespace

Assemblage assemblage_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("scenario") || !doc["scenario"].is_string()) {
        throw Error(ErrorCode::Parse, "missing \"scenario\"");
    }
    const auto tag = doc["scenario"].get<std::string>();
    Scenario scenario;
    if (tag == "1sdi") {
        scenario = Scenario::OneSided;
    } else if (tag == "2sdi") {
        scenario = Scenario::TwoSided;
    } else {
        throw Error(ErrorCode::Parse, "unknown scenario '" + tag + "'");
    }
    const int dim = Assemblage::element_dim(scenario);
    if (doc.contains("element_dim") && doc["element_dim"] != dim) {
        throw Error(ErrorCode::Parse, "element_dim does not match scenario");
    }
    if (!doc.contains("elements") || !doc["elements"].is_array()) {
        throw Error(ErrorCode::Parse, "missing \"elements\" array");
    }

    const int count = Assemblage::element_count(scenario);
    std::vector<HermitianMatrix> elements(count);
    std::vector<bool> seen(count, false);
    for (const auto& e : doc["elements"]) {
        int k;
        if (scenario == Scenario::OneSided) {
            k = Assemblage::index(index_field(e, "a", 2), index_field(e, "x", 3));
        } else {
            k = Assemblage::index(index_field(e, "a", 2), index_field(e, "b", 2),
                                  index_field(e, "x", 3), index_field(e, "y", 3));
        }
        if (seen[k]) {
            throw Error(ErrorCode::Parse, "duplicate element " + std::to_string(k));
        }
        const auto& data = e.contains("data") ? e["data"] : json();
        if (!data.is_array() || static_cast<int>(data.size()) != dim * dim) {
            throw Error(ErrorCode::Parse, "element data must hold " + std::to_string(dim * dim) +
                                              " [re, im] pairs");
        }
        Matrix m(dim);
        for (int i = 0; i < dim * dim; ++i) {
            const auto& z = data[i];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw Error(ErrorCode::Parse, "entries must be [re, im] number pairs");
            }
            m(i / dim, i % dim) = Complex(z[0].get<double>(), z[1].get<double>());
        }
        elements[k] = HermitianMatrix(m);
        seen[k] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw Error(ErrorCode::Parse, "assemblage is missing elements");
    }
    std::optional<double> theta;
    if (doc.contains("theta") && doc["theta"].is_number()) {
        theta = doc["theta"].get<double>();
    }
    return Assemblage(scenario, std::move(elements), theta);
}

Assemblage load_assemblage(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Parse, "cannot open " + path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
    return assemblage_from_json(doc);
}

json to_json(const ValidationReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"invariant", v.invariant}, {"where", v.where}, {"deviation", v.deviation}});
    }
    return {{"valid", report.ok()}, {"violations", violations}};
}

json to_json(const OptimizationResult& result) {
    return {{"kappa_star", result.kappa_star},
            {"f_star", result.f_star},
            {"evaluations", result.evaluations},
            {"bracket_width", result.bracket_width}};
}

json to_json(const SimOutcome& outcome) {
    const auto& c = outcome.config;
    json histogram = json::object();
    for (const auto& [bits, count] : outcome.bitstring_histogram) {
        histogram[bits] = count;
    }
    return {{"theta", c.theta},
            {"kappa", c.kappa},
            {"n_copies", c.n_copies},
            {"scenario", std::string(scenario_name(c.scenario))},
            {"trials", c.trials},
            {"seed", c.seed},
            {"success_count", outcome.success_count},
            {"success_fraction", outcome.success_fraction()},
            {"bitstring_histogram", histogram},
            {"empirical_assemblage", to_json(outcome.empirical_assemblage)}};
}

}  // namespace steerdist
