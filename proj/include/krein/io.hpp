#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "krein/family.hpp"
#include "krein/products.hpp"
#include "krein/space.hpp"

namespace krein {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Tolerance knobs shared by the CLI commands and echoed into reports.
struct Tolerances {
    double cluster = 1e-8;
    double rank = 1e-9;
    double guard = 1e-12;
};

/// A parsed operator description: the ambient symmetry J plus exactly one
/// payload (a square operator T, a rectangular factor pair, or a block
/// family generator).
struct OperatorSpec {
    FundamentalSymmetry J;
    std::variant<Matrix, FactorPair, BlockFamily> payload;

    bool has_operator() const { return std::holds_alternative<Matrix>(payload); }
    bool has_factors() const { return std::holds_alternative<FactorPair>(payload); }
    bool has_family() const { return std::holds_alternative<BlockFamily>(payload); }

    const Matrix& operator_matrix() const { return std::get<Matrix>(payload); }
    const FactorPair& factors() const { return std::get<FactorPair>(payload); }
    const BlockFamily& family() const { return std::get<BlockFamily>(payload); }
};

/// Parses and validates a spec document.  Complex entries are [re, im]
/// pairs; bare numbers are real.  J may be given as an explicit matrix,
/// {"signature": [+-1, ...]} or {"flip_blocks": k}.  Throws ParseError for
/// malformed JSON and ValidationError (naming the offending key) for
/// structural problems.
OperatorSpec parse_spec(const Json& doc);
OperatorSpec load_spec(const std::string& path);

/// Canonical serialization: fixed key order, J as an explicit matrix,
/// every entry as [re, im].  Loading the emitted document reproduces the
/// same in-memory value and hence the same digest.
OrderedJson normalized_spec_json(const OperatorSpec& spec);

/// Content digest ("fnv1a64:<hex>") of the canonical serialization.
std::string spec_digest(const OperatorSpec& spec);

Json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const Json& value, const std::string& key);
Json complex_to_json(Complex z);

/// Writes via a temporary file in the same directory plus an atomic rename.
void atomic_write_file(const std::string& path, const std::string& content);

/// "re,im,sigma_min" rows, row-major over the grid.
std::string pseudospectrum_csv(const PseudospectrumGrid& grid);

/// "y,resolvent_norm" rows in sample order.
std::string growth_csv(const GrowthFit& fit);

} // namespace krein
