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

#include "hymera/composition.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <set>

namespace hymera {

using nlohmann::json;

namespace {

const std::set<std::string> kPlainRoles = {"Y", "R", "Q", "T", "S", "A", "B", "U", "W"};

std::string label(const LegRef &r) { return r.node + "." + r.leg; }

LegRef leg_ref_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
        throw CompositionError("leg reference must be [\"node\", \"leg\"], got " + j.dump());
    }
    return {j[0].get<std::string>(), j[1].get<std::string>()};
}

json leg_ref_to_json(const LegRef &r) { return json::array({r.node, r.leg}); }

const SchemaNode &find_node(const ContractionSchema &s, const std::string &id) {
    for (const auto &n : s.nodes) {
        if (n.id == id) return n;
    }
    throw CompositionError("schema '" + s.name + "' has no node '" + id + "'");
}

Tensor node_tensor(const ContractionSchema &s, const SchemaNode &n, const Bindings &b, int depth = 0) {
    if (depth > static_cast<int>(s.nodes.size())) throw CompositionError("conjugate chain loops in '" + s.name + "'");
    Tensor base;
    if (n.role == "I") {
        base = Tensor::identity(n.dim, "o", "i");
    } else if (n.role.rfind("conj:", 0) == 0) {
        const SchemaNode &target = find_node(s, n.role.substr(5));
        base = conj(node_tensor(s, target, b, depth + 1));
    } else {
        auto it = b.find(n.role);
        if (it == b.end()) throw CompositionError("role '" + n.role + "' of node '" + n.id + "' is not bound");
        base = it->second;
    }
    if (base.rank() != n.legs.size()) {
        throw CompositionError("node '" + n.id + "' lists " + std::to_string(n.legs.size()) + " legs but its tensor has " +
                               std::to_string(base.rank()));
    }
    std::vector<std::string> legs;
    for (const auto &l : n.legs) legs.push_back(n.id + "." + l);
    return base.with_legs(std::move(legs));
}

std::vector<Tensor> bind_nodes(const ContractionSchema &s, const Bindings &b) {
    std::vector<Tensor> out;
    for (const auto &n : s.nodes) out.push_back(node_tensor(s, n, b));
    return out;
}

Tensor finalize(const ContractionSchema &s, Tensor t) {
    std::vector<std::string> order;
    for (const auto &group : s.outputs) {
        for (const auto &r : group) order.push_back(label(r));
    }
    t = permute(t, order);
    const auto names = s.resolved_output_names();
    for (std::size_t g = 0; g < s.outputs.size(); ++g) {
        const auto &group = s.outputs[g];
        if (group.size() == 1) {
            t = t.rename(label(group[0]), names[g]);
        } else {
            std::vector<std::string> members;
            for (const auto &r : group) members.push_back(label(r));
            t = fuse(t, members, names[g]);
        }
    }
    if (s.scale != 1.0) t = scaled(t, s.scale);
    return t;
}

// Clusters of already-contracted nodes; every leg label maps to its owner.
struct ClusterSet {
    std::vector<std::optional<Tensor>> clusters;
    std::map<std::string, std::size_t> owner;

    explicit ClusterSet(std::vector<Tensor> nodes) {
        for (auto &t : nodes) {
            for (const auto &l : t.legs()) owner[l] = clusters.size();
            clusters.emplace_back(std::move(t));
        }
    }

    void merge(std::size_t i, std::size_t j, const std::vector<std::pair<std::string, std::string>> &pairs) {
        if (i == j) {
            clusters[i] = trace(*clusters[i], pairs);
            return;
        }
        Tensor r = contract(*clusters[i], *clusters[j], pairs);
        for (const auto &l : r.legs()) owner[l] = i;
        clusters[i] = std::move(r);
        clusters[j].reset();
    }

    Tensor single(const std::string &name) const {
        std::optional<Tensor> out;
        for (const auto &c : clusters) {
            if (!c) continue;
            if (out) throw CompositionError("schema '" + name + "' is disconnected");
            out = c;
        }
        return *out;
    }
};

template <typename F>
Tensor guarded(const ContractionSchema &s, F &&body) {
    try {
        return body();
    } catch (const TensorError &e) {
        throw CompositionError("schema '" + s.name + "': " + e.what());
    }
}

}  // namespace

std::vector<std::string> ContractionSchema::resolved_output_names() const {
    if (!output_names.empty()) return output_names;
    std::vector<std::string> names;
    for (const auto &group : outputs) {
        std::string n;
        for (const auto &r : group) {
            if (!n.empty()) n += "+";
            n += label(r);
        }
        names.push_back(n);
    }
    return names;
}

std::vector<std::string> ContractionSchema::out_legs() const {
    std::vector<std::string> out;
    for (const auto &n : resolved_output_names()) {
        if (std::find(in_legs.begin(), in_legs.end(), n) == in_legs.end()) out.push_back(n);
    }
    return out;
}

ContractionSchema schema_from_json(const json &j) {
    ContractionSchema s;
    try {
        s.name = j.value("name", "");
        for (const auto &n : j.at("nodes")) {
            SchemaNode node;
            node.id = n.at("id").get<std::string>();
            node.role = n.at("role").get<std::string>();
            node.legs = n.at("legs").get<std::vector<std::string>>();
            node.dim = n.value("dim", std::size_t{2});
            s.nodes.push_back(std::move(node));
        }
        for (const auto &b : j.value("bonds", json::array())) {
            if (!b.is_array() || b.size() != 2) throw CompositionError("bond must be a pair of leg references");
            s.bonds.emplace_back(leg_ref_from_json(b[0]), leg_ref_from_json(b[1]));
        }
        for (const auto &o : j.at("outputs")) {
            if (o.is_array() && !o.empty() && o[0].is_array()) {
                std::vector<LegRef> group;
                for (const auto &r : o) group.push_back(leg_ref_from_json(r));
                s.outputs.push_back(std::move(group));
            } else {
                s.outputs.push_back({leg_ref_from_json(o)});
            }
        }
        s.output_names = j.value("output_names", std::vector<std::string>{});
        s.scale = j.value("scale", 1.0);
        s.in_legs = j.value("in_legs", std::vector<std::string>{});
        const json attributes = j.value("attributes", json::object());
        for (const auto &[k, v] : attributes.items()) s.attributes[k] = v.get<double>();
    } catch (const json::exception &e) {
        throw CompositionError(std::string("malformed schema: ") + e.what());
    }
    validate_schema(s);
    return s;
}

json schema_to_json(const ContractionSchema &s) {
    json j;
    if (!s.name.empty()) j["name"] = s.name;
    j["nodes"] = json::array();
    for (const auto &n : s.nodes) {
        json node = {{"id", n.id}, {"role", n.role}, {"legs", n.legs}};
        if (n.role == "I") node["dim"] = n.dim;
        j["nodes"].push_back(node);
    }
    j["bonds"] = json::array();
    for (const auto &[a, b] : s.bonds) j["bonds"].push_back(json::array({leg_ref_to_json(a), leg_ref_to_json(b)}));
    j["outputs"] = json::array();
    for (const auto &group : s.outputs) {
        if (group.size() == 1) {
            j["outputs"].push_back(leg_ref_to_json(group[0]));
        } else {
            json g = json::array();
            for (const auto &r : group) g.push_back(leg_ref_to_json(r));
            j["outputs"].push_back(g);
        }
    }
    if (!s.output_names.empty()) j["output_names"] = s.output_names;
    if (s.scale != 1.0) j["scale"] = s.scale;
    if (!s.in_legs.empty()) j["in_legs"] = s.in_legs;
    if (!s.attributes.empty()) j["attributes"] = s.attributes;
    return j;
}

ContractionSchema load_schema(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw CompositionError("cannot open schema file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw CompositionError(path.string() + ": " + e.what());
    }
    auto s = schema_from_json(j);
    if (s.name.empty()) s.name = path.stem().string();
    return s;
}

void validate_schema(const ContractionSchema &s) {
    if (s.nodes.empty()) throw CompositionError("schema '" + s.name + "' has no nodes");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto &n = s.nodes[i];
        if (!index.emplace(n.id, i).second) throw CompositionError("duplicate node id '" + n.id + "'");
        bool known = kPlainRoles.count(n.role) || n.role == "I" || n.role.rfind("conj:", 0) == 0;
        if (!known) throw CompositionError("node '" + n.id + "' has unknown role '" + n.role + "'");
        if (n.role == "I" && n.legs.size() != 2) throw CompositionError("identity node '" + n.id + "' needs two legs");
        std::set<std::string> legs(n.legs.begin(), n.legs.end());
        if (legs.size() != n.legs.size()) throw CompositionError("node '" + n.id + "' repeats a leg name");
    }
    for (const auto &n : s.nodes) {
        if (n.role.rfind("conj:", 0) == 0 && !index.count(n.role.substr(5))) {
            throw CompositionError("node '" + n.id + "' conjugates unknown node '" + n.role.substr(5) + "'");
        }
    }

    std::map<std::string, int> uses;
    for (const auto &n : s.nodes) {
        for (const auto &l : n.legs) uses[n.id + "." + l] = 0;
    }
    auto use = [&](const LegRef &r) {
        auto it = uses.find(label(r));
        if (it == uses.end()) throw CompositionError("schema '" + s.name + "' references unknown leg " + label(r));
        ++it->second;
    };
    for (const auto &[a, b] : s.bonds) {
        use(a);
        use(b);
    }
    for (const auto &group : s.outputs) {
        if (group.empty()) throw CompositionError("empty output group");
        for (const auto &r : group) use(r);
    }
    for (const auto &[l, n] : uses) {
        if (n == 0) throw CompositionError("leg " + l + " is neither bonded nor an output");
        if (n > 1) throw CompositionError("leg " + l + " is used " + std::to_string(n) + " times");
    }
    if (!s.output_names.empty() && s.output_names.size() != s.outputs.size()) {
        throw CompositionError("output_names must name every output");
    }
    const auto names = s.resolved_output_names();
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
        throw CompositionError("output names repeat");
    }
    for (const auto &l : s.in_legs) {
        if (std::find(names.begin(), names.end(), l) == names.end()) {
            throw CompositionError("in_legs entry '" + l + "' is not an output");
        }
    }

    std::vector<std::size_t> parent(s.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (const auto &[a, b] : s.bonds) parent[root(index.at(a.node))] = root(index.at(b.node));
    for (std::size_t i = 1; i < s.nodes.size(); ++i) {
        if (root(i) != root(0)) throw CompositionError("schema '" + s.name + "' is disconnected");
    }
}

Tensor compose(const ContractionSchema &s, const Bindings &bindings) {
    validate_schema(s);
    return guarded(s, [&] {
        ClusterSet cs(bind_nodes(s, bindings));
        std::vector<bool> done(s.bonds.size(), false);
        std::size_t remaining = s.bonds.size();
        while (remaining > 0) {
            // Gather bonds by cluster pair and pick the cheapest merge.
            std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_pair;
            for (std::size_t k = 0; k < s.bonds.size(); ++k) {
                if (done[k]) continue;
                std::size_t i = cs.owner.at(label(s.bonds[k].first));
                std::size_t j = cs.owner.at(label(s.bonds[k].second));
                by_pair[{std::min(i, j), std::max(i, j)}].push_back(k);
            }
            double best = -1.0;
            std::pair<std::size_t, std::size_t> pick;
            for (const auto &[ij, ks] : by_pair) {
                double inner = 1.0;
                for (auto k : ks) {
                    const std::string a = label(s.bonds[k].first);
                    inner *= static_cast<double>(cs.clusters[cs.owner.at(a)]->dim(a));
                }
                double size = ij.first == ij.second
                                  ? static_cast<double>(cs.clusters[ij.first]->size()) / (inner * inner)
                                  : static_cast<double>(cs.clusters[ij.first]->size()) *
                                        static_cast<double>(cs.clusters[ij.second]->size()) / (inner * inner);
                if (best < 0 || size < best) {
                    best = size;
                    pick = ij;
                }
            }
            std::vector<std::pair<std::string, std::string>> pairs;
            for (auto k : by_pair[pick]) {
                std::string a = label(s.bonds[k].first), b = label(s.bonds[k].second);
                if (cs.owner.at(a) != pick.first) std::swap(a, b);
                pairs.emplace_back(a, b);
                done[k] = true;
                --remaining;
            }
            cs.merge(pick.first, pick.second, pairs);
        }
        return finalize(s, cs.single(s.name));
    });
}

Tensor compose_in_order(const ContractionSchema &s, const Bindings &bindings, const std::vector<std::size_t> &bond_order) {
    validate_schema(s);
    std::vector<std::size_t> sorted = bond_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted.size() != s.bonds.size() || sorted[k] != k) {
            throw CompositionError("bond order must be a permutation of the schema's bonds");
        }
    }
    return guarded(s, [&] {
        ClusterSet cs(bind_nodes(s, bindings));
        for (auto k : bond_order) {
            std::string a = label(s.bonds[k].first), b = label(s.bonds[k].second);
            std::size_t i = cs.owner.at(a), j = cs.owner.at(b);
            if (i > j) {
                std::swap(i, j);
                std::swap(a, b);
            }
            cs.merge(i, j, {{a, b}});
        }
        return finalize(s, cs.single(s.name));
    });
}

std::pair<double, double> composite_constant(const Tensor &w, const std::vector<std::string> &in_legs,
                                             const std::vector<std::string> &out_legs) {
    try {
        auto [defect, c] = gram_identity_fit(matricize(w, out_legs, in_legs));
        return {c, defect};
    } catch (const TensorError &e) {
        throw CompositionError(std::string("invalid isometry partition: ") + e.what());
    }
}

double isometry_defect(const Tensor &w, const std::vector<std::string> &in_legs,
                       const std::vector<std::string> &out_legs) {
    MatrixView m;
    try {
        m = matricize(w, out_legs, in_legs);
    } catch (const TensorError &e) {
        throw CompositionError(std::string("invalid isometry partition: ") + e.what());
    }
    MatrixView g = matmul(adjoint(m), m);
    double d = 0.0;
    for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) d = std::max(d, std::abs(g(i, j) - cplx(i == j ? 1.0 : 0.0)));
    }
    return d;
}

Tensor normalize_composite(const Tensor &w, const std::vector<std::string> &in_legs,
                           const std::vector<std::string> &out_legs, double tol) {
    auto [c, defect] = composite_constant(w, in_legs, out_legs);
    if (!(c > 0.0) || defect > tol * std::max(1.0, c)) {
        throw CompositionError("W^dagger W is not proportional to the identity (defect " + std::to_string(defect) +
                               ", c = " + std::to_string(c) + ")");
    }
    return c == 1.0 ? w : scaled(w, 1.0 / std::sqrt(c));
}

bool nontrivial_spectrum_check(const MatrixView &rho) {
    auto ev = hermitian_eigenvalues(rho, 1e-8);
    return ev.back() - ev.front() > 1e-6;
}

Decomposition decomposition_from_json(const json &j) {
    Decomposition d;
    try {
        d.name = j.at("name").get<std::string>();
        d.p = j.at("p").get<int>();
        d.q = j.at("q").get<int>();
        for (const auto &f : j.at("families")) d.families.push_back(family_from_string(f.get<std::string>()));
        for (const auto &[role, sj] : j.at("schemas").items()) {
            auto s = schema_from_json(sj);
            if (s.name.empty()) s.name = d.name + ":" + role;
            d.schemas.emplace(role, std::move(s));
        }
    } catch (const json::exception &e) {
        throw CompositionError(std::string("malformed decomposition: ") + e.what());
    } catch (const ParameterError &e) {
        throw CompositionError(e.what());
    }
    for (const char *role : {"A", "B", "U", "W"}) {
        if (!d.schemas.count(role)) throw CompositionError("decomposition '" + d.name + "' lacks role " + role);
    }
    return d;
}

Decomposition load_decomposition(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw CompositionError("cannot open decomposition file " + path.string());
    try {
        return decomposition_from_json(json::parse(in));
    } catch (const json::parse_error &e) {
        throw CompositionError(path.string() + ": " + e.what());
    }
}

std::filesystem::path preset_dir() {
    if (const char *env = std::getenv("HYMERA_PRESET_DIR"); env && *env) return env;
    return HYMERA_DEFAULT_PRESET_DIR;
}

std::string resolve_decomposition_name(const std::string &label, const std::string &tiling) {
    if (label.find('-') != std::string::npos) return label;
    if (tiling != "54" && tiling != "73") throw CompositionError("unknown tiling '" + tiling + "'");
    if (label == "YQR" && tiling == "54") return "QR-54";
    if (label == "QR" && tiling == "54") return "QR-54";
    if (label == "YQR" || label == "YQT" || label == "YQS") return label + "-" + tiling;
    throw CompositionError("unknown decomposition '" + label + "'");
}

Decomposition load_decomposition_preset(const std::string &label, const std::string &tiling) {
    const std::string name = resolve_decomposition_name(label, tiling);
    const auto path = preset_dir() / "decompositions" / (name + ".json");
    if (!std::filesystem::exists(path)) throw CompositionError("unknown decomposition preset '" + name + "'");
    return load_decomposition(path);
}

Bindings constituent_bindings(const Decomposition &d, const ParameterSet &p) {
    Bindings b;
    for (Family f : d.families) b.emplace(to_string(f), build(f, p));
    return b;
}

CompositeSet build_composites(const Decomposition &d, const ParameterSet &p, double tol) {
    return build_composites(d, constituent_bindings(d, p), tol);
}

CompositeSet build_composites(const Decomposition &d, const Bindings &constituents, double tol) {
    CompositeSet out;
    for (const auto &[role, schema] : d.schemas) {
        Tensor t = compose(schema, constituents);
        if (!schema.in_legs.empty()) {
            const auto outs = schema.out_legs();
            auto [c, defect] = composite_constant(t, schema.in_legs, outs);
            out.constants[role] = c;
            out.raw_defects[role] = isometry_defect(t, schema.in_legs, outs);
            t = normalize_composite(t, schema.in_legs, outs, tol);
        }
        out.tensors.emplace(role, std::move(t));
    }
    return out;
}

}  // namespace hymera
