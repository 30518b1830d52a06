// Copyright 2026 The hymera Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HYMERA_COMPOSITION_H
#define HYMERA_COMPOSITION_H

#include <filesystem>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "hymera/constituents.h"
#include "hymera/tensor.h"

namespace hymera {

/// Schema, binding or decomposition problems: unknown roles, dangling legs,
/// disconnected graphs, composites that are not isometries up to a constant.
struct CompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LegRef {
    std::string node;
    std::string leg;
    bool operator==(const LegRef &) const = default;
};

struct SchemaNode {
    std::string id;
    /// Y, R, Q, T, S, A, B, U, W, I (identity wire) or "conj:<node id>".
    std::string role;
    /// Positional names for the bound tensor's legs.
    std::vector<std::string> legs;
    /// Wire dimension, only read for role I.
    std::size_t dim = 2;
};

/// Wiring diagram: nodes, internal bonds and an ordered list of free legs.
/// An output entry with more than one leg becomes one fused leg.
struct ContractionSchema {
    std::string name;
    std::vector<SchemaNode> nodes;
    std::vector<std::pair<LegRef, LegRef>> bonds;
    std::vector<std::vector<LegRef>> outputs;
    std::vector<std::string> output_names;
    double scale = 1.0;
    /// Output names read as the input side when the result is an isometry.
    std::vector<std::string> in_legs;
    /// Free-form extra fields of the file (cone site counts and the like).
    std::map<std::string, double> attributes;

    /// Output leg names after defaults are applied ("node.leg", fused groups
    /// joined with '+').
    std::vector<std::string> resolved_output_names() const;
    std::vector<std::string> out_legs() const;
};

ContractionSchema schema_from_json(const nlohmann::json &j);
nlohmann::json schema_to_json(const ContractionSchema &s);
ContractionSchema load_schema(const std::filesystem::path &path);

using Bindings = std::map<std::string, Tensor>;

/// Checks the schema structure alone: unique ids, known legs, every leg used
/// exactly once, connectivity. Throws CompositionError.
void validate_schema(const ContractionSchema &s);

/// Contract the whole schema. Pairs of clusters are merged greedily by
/// smallest intermediate size.
Tensor compose(const ContractionSchema &s, const Bindings &bindings);
/// Same result, evaluating bonds strictly in the given order.
Tensor compose_in_order(const ContractionSchema &s, const Bindings &bindings, const std::vector<std::size_t> &bond_order);

/// ||W^dagger W - I||_max with W viewed as a map from in_legs to out_legs.
double isometry_defect(const Tensor &w, const std::vector<std::string> &in_legs,
                       const std::vector<std::string> &out_legs);
/// W / sqrt(c) where W^dagger W = c I; throws CompositionError if W^dagger W
/// is not proportional to the identity within tol.
Tensor normalize_composite(const Tensor &w, const std::vector<std::string> &in_legs,
                           const std::vector<std::string> &out_legs, double tol = 1e-10);
/// The c of W^dagger W = c I together with the residual defect.
std::pair<double, double> composite_constant(const Tensor &w, const std::vector<std::string> &in_legs,
                                             const std::vector<std::string> &out_legs);

/// True iff max(lambda) - min(lambda) > 1e-6; throws if rho is not Hermitian
/// within 1e-8.
bool nontrivial_spectrum_check(const MatrixView &rho);

/// A named set of composite schemas (A, B, U, W) over constituent families.
struct Decomposition {
    std::string name;
    int p = 0;
    int q = 0;
    std::vector<Family> families;
    std::map<std::string, ContractionSchema> schemas;
};

Decomposition decomposition_from_json(const nlohmann::json &j);
Decomposition load_decomposition(const std::filesystem::path &path);

/// Root of the shipped presets: $HYMERA_PRESET_DIR or the compiled-in path.
std::filesystem::path preset_dir();
/// Preset name for a decomposition label on a tiling, e.g. ("YQR", "54") ->
/// "QR-54" and ("YQT", "73") -> "YQT-73". Full preset names pass through.
std::string resolve_decomposition_name(const std::string &label, const std::string &tiling);
Decomposition load_decomposition_preset(const std::string &label, const std::string &tiling = "54");

/// Constituent tensors for every family the decomposition uses.
Bindings constituent_bindings(const Decomposition &d, const ParameterSet &p);

struct CompositeSet {
    Bindings tensors;
    /// c with W^dagger W = c I before normalization, per role.
    std::map<std::string, double> constants;
    std::map<std::string, double> raw_defects;
};

/// Compose A, B, U, W from the constituents and rescale every composite that
/// declares in_legs to an exact isometry.
CompositeSet build_composites(const Decomposition &d, const ParameterSet &p, double tol = 1e-10);
/// Same, from constituent tensors keyed by family name.
CompositeSet build_composites(const Decomposition &d, const Bindings &constituents, double tol = 1e-10);

}  // namespace hymera

#endif
