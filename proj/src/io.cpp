#include "krein/io.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace krein {

namespace {

Complex complex_from_json(const Json& value, const std::string& key) {
    if (value.is_number()) return Complex(value.get<double>(), 0.0);
    if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
        return Complex(value[0].get<double>(), value[1].get<double>());
    throw ValidationError("entry of \"" + key + "\" must be a number or an [re, im] pair");
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& context) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("missing required key \"" + key + "\"" +
                              (context.empty() ? "" : " in " + context));
    return *it;
}

ScaleRule scale_rule_from_json(const Json& value, const std::string& key) {
    if (!value.is_object()) throw ValidationError("\"" + key + "\" must be an object");
    const std::string kind = require_key(value, "kind", key).get<std::string>();
    ScaleRule rule;
    if (kind == "inverse_power")
        rule.kind = ScaleRule::Kind::InversePower;
    else if (kind == "geometric")
        rule.kind = ScaleRule::Kind::Geometric;
    else
        throw ValidationError("\"" + key + ".kind\" must be inverse_power or geometric");
    rule.parameter = require_key(value, "parameter", key).get<double>();
    rule.validate();
    return rule;
}

KappaRule kappa_rule_from_json(const Json& value, const std::string& key) {
    if (!value.is_object()) throw ValidationError("\"" + key + "\" must be an object");
    const std::string kind = require_key(value, "kind", key).get<std::string>();
    KappaRule rule;
    if (kind == "constant")
        rule.kind = KappaRule::Kind::Constant;
    else if (kind == "power")
        rule.kind = KappaRule::Kind::Power;
    else if (kind == "geometric")
        rule.kind = KappaRule::Kind::Geometric;
    else
        throw ValidationError("\"" + key + ".kind\" must be constant, power or geometric");
    rule.parameter = require_key(value, "parameter", key).get<double>();
    rule.validate();
    return rule;
}

Json scale_rule_to_json(const ScaleRule& rule) {
    return Json{{"kind", rule.kind == ScaleRule::Kind::InversePower ? "inverse_power"
                                                                    : "geometric"},
                {"parameter", rule.parameter}};
}

Json kappa_rule_to_json(const KappaRule& rule) {
    const char* kind = rule.kind == KappaRule::Kind::Constant  ? "constant"
                       : rule.kind == KappaRule::Kind::Power   ? "power"
                                                               : "geometric";
    return Json{{"kind", kind}, {"parameter", rule.parameter}};
}

BlockFamily family_from_json(const Json& value) {
    if (!value.is_object()) throw ValidationError("\"family\" must be an object");
    for (const auto& [key, _] : value.items())
        if (key != "kind" && key != "seed" && key != "params")
            throw ValidationError("unknown key \"family." + key + "\"");
    const std::string kind = require_key(value, "kind", "\"family\"").get<std::string>();
    std::uint64_t seed = 0;
    if (value.contains("seed")) {
        const Json& s = value.at("seed");
        if (!s.is_number_integer()) throw ValidationError("\"family.seed\" must be an integer");
        seed = s.get<std::uint64_t>();
    }
    const Json params = value.contains("params") ? value.at("params") : Json::object();
    if (!params.is_object()) throw ValidationError("\"family.params\" must be an object");

    if (kind == "example_one") {
        ScaleRule scale{ScaleRule::Kind::InversePower, 1.0};
        if (params.contains("scale")) scale = scale_rule_from_json(params.at("scale"), "family.params.scale");
        bool random_unitary = true;
        if (params.contains("random_unitary")) random_unitary = params.at("random_unitary").get<bool>();
        return example_one_family(seed, scale, random_unitary);
    }
    if (kind == "graded_neutrality") {
        const ScaleRule eigenvalue =
            scale_rule_from_json(require_key(params, "eigenvalue", "\"family.params\""),
                                 "family.params.eigenvalue");
        const KappaRule kappa = kappa_rule_from_json(
            require_key(params, "kappa", "\"family.params\""), "family.params.kappa");
        return graded_neutrality_family(seed, eigenvalue, kappa);
    }
    if (kind == "explicit_list") {
        const Json& blocks = require_key(params, "blocks", "\"family.params\"");
        if (!blocks.is_array() || blocks.empty())
            throw ValidationError("\"family.params.blocks\" must be a nonempty array");
        std::vector<FamilyBlock> list;
        for (size_t i = 0; i < blocks.size(); ++i) {
            const Json& b = blocks[i];
            const std::string ctx = "family.params.blocks[" + std::to_string(i) + "]";
            list.push_back(FamilyBlock{matrix_from_json(require_key(b, "T", ctx), ctx + ".T"),
                                       matrix_from_json(require_key(b, "J", ctx), ctx + ".J")});
        }
        bool selfadjoint = false;
        if (params.contains("selfadjoint")) selfadjoint = params.at("selfadjoint").get<bool>();
        return explicit_list_family(std::move(list), selfadjoint);
    }
    if (kind == "product_of_blocks") {
        double envelope = 1.0;
        if (params.contains("envelope")) envelope = params.at("envelope").get<double>();
        std::optional<double> planted;
        int planted_index = 1;
        if (params.contains("planted_x0")) planted = params.at("planted_x0").get<double>();
        if (params.contains("planted_index")) planted_index = params.at("planted_index").get<int>();
        return product_of_blocks_family(seed, envelope, planted, planted_index);
    }
    throw ValidationError("unknown family kind \"" + kind + "\"");
}

Json family_to_json(const BlockFamily& family) {
    OrderedJson out;
    switch (family.kind()) {
        case BlockFamily::Kind::ExampleOne: {
            const auto& p = std::get<ExampleOneParams>(family.params());
            out["kind"] = "example_one";
            out["seed"] = family.seed();
            out["params"] = Json{{"scale", scale_rule_to_json(p.scale)},
                                 {"random_unitary", p.random_unitary}};
            break;
        }
        case BlockFamily::Kind::GradedNeutrality: {
            const auto& p = std::get<GradedNeutralityParams>(family.params());
            out["kind"] = "graded_neutrality";
            out["seed"] = family.seed();
            out["params"] = Json{{"eigenvalue", scale_rule_to_json(p.eigenvalue)},
                                 {"kappa", kappa_rule_to_json(p.kappa)}};
            break;
        }
        case BlockFamily::Kind::ExplicitList: {
            const auto& p = std::get<ExplicitListParams>(family.params());
            out["kind"] = "explicit_list";
            out["seed"] = family.seed();
            Json blocks = Json::array();
            for (const auto& b : p.blocks)
                blocks.push_back(Json{{"T", matrix_to_json(b.T)}, {"J", matrix_to_json(b.J)}});
            out["params"] = Json{{"blocks", blocks}, {"selfadjoint", p.selfadjoint}};
            break;
        }
        case BlockFamily::Kind::ProductOfBlocks: {
            const auto& p = std::get<ProductOfBlocksParams>(family.params());
            out["kind"] = "product_of_blocks";
            out["seed"] = family.seed();
            Json params{{"envelope", p.envelope}, {"planted_index", p.planted_index}};
            if (p.planted_x0) params["planted_x0"] = *p.planted_x0;
            out["params"] = params;
            break;
        }
    }
    return out;
}

FundamentalSymmetry symmetry_from_json(const Json& value) {
    if (value.is_array()) return FundamentalSymmetry(matrix_from_json(value, "J"));
    if (value.is_object()) {
        if (value.contains("signature")) {
            const Json& sig = value.at("signature");
            if (!sig.is_array() || sig.empty())
                throw ValidationError("\"J.signature\" must be a nonempty array of +-1");
            std::vector<int> signs;
            for (const auto& s : sig) {
                if (!s.is_number_integer())
                    throw ValidationError("\"J.signature\" entries must be integers +-1");
                signs.push_back(s.get<int>());
            }
            return FundamentalSymmetry::from_signature(signs);
        }
        if (value.contains("flip_blocks")) {
            const Json& k = value.at("flip_blocks");
            if (!k.is_number_integer())
                throw ValidationError("\"J.flip_blocks\" must be an integer");
            return FundamentalSymmetry::flip_blocks(k.get<int>());
        }
    }
    throw ValidationError("\"J\" must be a matrix, {\"signature\": [...]} or {\"flip_blocks\": k}");
}

} // namespace

Json matrix_to_json(const Matrix& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(complex_to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Matrix matrix_from_json(const Json& value, const std::string& key) {
    if (!value.is_array() || value.empty())
        throw ValidationError("\"" + key + "\" must be a nonempty array of rows");
    const size_t rows = value.size();
    size_t cols = 0;
    for (size_t i = 0; i < rows; ++i) {
        if (!value[i].is_array() || value[i].empty())
            throw ValidationError("row " + std::to_string(i) + " of \"" + key +
                                  "\" must be a nonempty array");
        if (i == 0)
            cols = value[i].size();
        else if (value[i].size() != cols)
            throw ValidationError("rows of \"" + key + "\" have unequal lengths");
    }
    Matrix M(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) M(i, j) = complex_from_json(value[i][j], key);
    require_finite(M, key.c_str());
    return M;
}

OperatorSpec parse_spec(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("spec document must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (key != "J" && key != "T" && key != "factors" && key != "family")
            throw ValidationError("unknown key \"" + key + "\"");

    FundamentalSymmetry J = symmetry_from_json(require_key(doc, "J", ""));

    const int payloads = static_cast<int>(doc.contains("T")) +
                         static_cast<int>(doc.contains("factors")) +
                         static_cast<int>(doc.contains("family"));
    if (payloads != 1)
        throw ValidationError("exactly one of \"T\", \"factors\", \"family\" must be present");

    if (doc.contains("T")) {
        Matrix T = matrix_from_json(doc.at("T"), "T");
        if (T.rows() != T.cols()) throw ValidationError("\"T\" must be square");
        if (T.rows() != J.dim())
            throw ValidationError("\"T\" dimension does not match \"J\" dimension");
        return OperatorSpec{std::move(J), std::move(T)};
    }
    if (doc.contains("factors")) {
        const Json& f = doc.at("factors");
        if (!f.is_object()) throw ValidationError("\"factors\" must be an object");
        for (const auto& [key, _] : f.items())
            if (key != "A" && key != "B") throw ValidationError("unknown key \"factors." + key + "\"");
        Matrix A = matrix_from_json(require_key(f, "A", "\"factors\""), "factors.A");
        Matrix B = matrix_from_json(require_key(f, "B", "\"factors\""), "factors.B");
        return OperatorSpec{std::move(J), FactorPair(std::move(A), std::move(B))};
    }
    return OperatorSpec{std::move(J), family_from_json(doc.at("family"))};
}

OperatorSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file: " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_spec(doc);
}

OrderedJson normalized_spec_json(const OperatorSpec& spec) {
    OrderedJson out;
    out["J"] = matrix_to_json(spec.J.matrix());
    if (spec.has_operator()) {
        out["T"] = matrix_to_json(spec.operator_matrix());
    } else if (spec.has_factors()) {
        OrderedJson f;
        f["A"] = matrix_to_json(spec.factors().A);
        f["B"] = matrix_to_json(spec.factors().B);
        out["factors"] = f;
    } else {
        out["family"] = family_to_json(spec.family());
    }
    return out;
}

std::string spec_digest(const OperatorSpec& spec) {
    const std::string dump = normalized_spec_json(spec).dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << hash;
    return out.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open output file: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw ValidationError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string pseudospectrum_csv(const PseudospectrumGrid& grid) {
    std::ostringstream out;
    out << "re,im,sigma_min\n";
    out.precision(17);
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            const Complex z = grid.point(ix, iy);
            out << z.real() << ',' << z.imag() << ',' << grid.at(ix, iy) << '\n';
        }
    return out.str();
}

std::string growth_csv(const GrowthFit& fit) {
    std::ostringstream out;
    out << "y,resolvent_norm\n";
    out.precision(17);
    for (const auto& s : fit.samples) out << s.y << ',' << s.resolvent_norm << '\n';
    return out.str();
}

} // namespace krein
