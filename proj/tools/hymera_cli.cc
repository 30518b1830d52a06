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

// hymera: command-line front end.
//
// Exit codes: 0 success, 1 domain violation, 2 bad input or configuration.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <sstream>

#include "hymera/composition.h"
#include "hymera/constituents.h"
#include "hymera/experiments.h"
#include "hymera/io.h"
#include "hymera/perfect.h"
#include "hymera/superop.h"
#include "hymera/tiling.h"

using namespace hymera;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
};

double tol_or(const Globals &g, double fallback) { return g.tol.value_or(fallback); }

void emit(const Globals &g, const json &doc) {
    if (g.out.empty()) return;
    std::ofstream f(g.out);
    if (!f) throw BadInput("cannot write " + g.out);
    f << doc.dump(2) << "\n";
}

ParameterSet draw_or_load(const Globals &g, const std::string &params_file) {
    if (!params_file.empty()) {
        ParameterSet p = params_from_json(read_json_file(params_file));
        if (g.seed) {
            // Fill any missing angles from the seed.
            std::mt19937_64 rng(*g.seed);
            const ParameterSet drawn = sample_parameters(rng);
            for (const auto &[i, v] : drawn.theta)
                if (!p.has(i)) p.set(i, v);
        }
        return p;
    }
    if (!g.seed) throw BadInput("--seed is required when parameters are drawn at random");
    std::mt19937_64 rng(*g.seed);
    return sample_parameters(rng);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// verify -------------------------------------------------------------------

struct ZeroEntry {
    Family family;
    std::size_t row = 0;
    std::size_t col = 0;
};

ZeroEntry parse_zero_entry(const std::string &spec) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) throw BadInput("--zero-entry expects FAMILY:ROW:COL");
    ZeroEntry z{family_from_string(spec.substr(0, a))};
    try {
        z.row = std::stoul(spec.substr(a + 1, b - a - 1));
        z.col = std::stoul(spec.substr(b + 1));
    } catch (const std::exception &) {
        throw BadInput("--zero-entry expects FAMILY:ROW:COL");
    }
    if (z.row > 3 || z.col > 3) throw BadInput("--zero-entry row and column must be in 0..3");
    return z;
}

int cmd_verify(const Globals &g, const std::string &label, const std::string &tiling, const std::string &params_file,
               const std::vector<std::string> &zero_specs) {
    const double tol = tol_or(g, 1e-10);
    const Decomposition d = load_decomposition_preset(label, tiling);
    std::vector<ZeroEntry> zeros;
    for (const auto &s : zero_specs) zeros.push_back(parse_zero_entry(s));
    for (const auto &z : zeros) {
        if (std::find(d.families.begin(), d.families.end(), z.family) == d.families.end()) {
            throw BadInput("family " + to_string(z.family) + " is not part of " + d.name);
        }
    }
    const ParameterSet p = draw_or_load(g, params_file);

    Bindings constituents = constituent_bindings(d, p);
    for (const auto &z : zeros) {
        auto &t = constituents.at(to_string(z.family));
        t = zero_entry(t, z.row, z.col);
    }

    bool all_pass = true;
    json doc = {{"decomposition", d.name}, {"params", params_to_json(p)}, {"tol", tol}};
    std::cout << "decomposition " << d.name << " (tol " << tol << ")\n";
    for (Family f : d.families) {
        const auto r = classify(constituents.at(to_string(f)), tol);
        bool pass = true;
        json jr = {{"family", to_string(f)}, {"vertical_defect", r.vertical_defect}, {"horizontal_defect", r.horizontal_defect}};
        std::string detail = "vertical " + fmt(r.vertical_defect);
        switch (f) {
            case Family::Y:
            case Family::R:
                pass = r.vertical_defect <= tol && r.horizontal_defect <= tol;
                detail += ", horizontal " + fmt(r.horizontal_defect);
                break;
            case Family::Q: pass = r.vertical_defect <= tol; break;
            case Family::T:
            case Family::S: {
                const double expect = f == Family::T ? t_scalar_constant(p.get(6), p.get(7))
                                                     : s_scalar_constant(p.get(8), p.get(9));
                pass = r.scalar_constant && r.normalized_vertical_defect <= tol &&
                       std::abs(*r.scalar_constant - expect) <= tol * std::max(1.0, expect);
                jr["scalar_constant"] = r.scalar_constant ? json(*r.scalar_constant) : json(nullptr);
                jr["expected_constant"] = expect;
                jr["normalized_vertical_defect"] = r.normalized_vertical_defect;
                detail = "M M^T = c I with c " + (r.scalar_constant ? fmt(*r.scalar_constant) : std::string("n/a")) +
                         " (closed form " + fmt(expect) + "), normalized defect " + fmt(r.normalized_vertical_defect);
                break;
            }
        }
        jr["pass"] = pass;
        doc["constituents"].push_back(jr);
        all_pass = all_pass && pass;
        std::cout << "  " << to_string(f) << ": " << (pass ? "pass" : "FAIL") << "  " << detail << "\n";
    }

    try {
        const CompositeSet cs = build_composites(d, constituents, tol);
        for (const auto &[role, c] : cs.constants) {
            std::cout << "  composite " << role << ": pass  c " << fmt(c) << "\n";
            doc["composites"].push_back({{"role", role}, {"constant", c}, {"pass", true}});
        }
    } catch (const CompositionError &e) {
        all_pass = false;
        std::cout << "  composites: FAIL  " << e.what() << "\n";
        doc["composites"].push_back({{"error", e.what()}, {"pass", false}});
    }
    doc["pass"] = all_pass;
    emit(g, doc);
    std::cout << (all_pass ? "all constraints hold\n" : "constraint violated\n");
    return all_pass ? kOk : kViolation;
}

// inflate ------------------------------------------------------------------

int cmd_inflate(const Globals &g, const std::string &tiling, const std::string &word, int layers, bool do_deflate) {
    if (layers < 0) throw BadInput("--layers must be non-negative");
    const InflationGrammar gr = load_grammar_preset(tiling);
    for (char c : word)
        if (c != 'a' && c != 'b') throw BadInput("words use the letters a and b only");
    json doc = {{"tiling", tiling}, {"scale_factor", scale_factor(gr)}};
    if (do_deflate) {
        const BoundaryWord w = deflate({word, layers}, gr);
        std::cout << w.letters << "\n";
        doc["deflated"] = w.letters;
        doc["parses"] = count_parses(word, gr);
        emit(g, doc);
        return kOk;
    }
    const BoundaryWord w = inflate_n({word, 0}, gr, layers);
    const auto counts = letter_counts(w.letters);
    const auto predicted = apply_counts(matrix_power(gr.matrix, layers), letter_counts(word));
    const bool match = counts == predicted;
    std::cout << (w.letters.size() <= 200 ? w.letters : w.letters.substr(0, 200) + "...") << "\n";
    std::cout << "layers " << layers << ", length " << w.letters.size() << ", a " << counts[0] << ", b " << counts[1]
              << ", matrix power " << (match ? "agrees" : "DISAGREES") << ", s " << fmt(scale_factor(gr)) << "\n";
    doc["word"] = w.letters;
    doc["layers"] = layers;
    doc["counts"] = {counts[0], counts[1]};
    doc["predicted_counts"] = {predicted[0], predicted[1]};
    emit(g, doc);
    return match ? kOk : kViolation;
}

// spectrum -----------------------------------------------------------------

int cmd_spectrum(const Globals &g, const std::string &label, const std::string &tiling, std::vector<std::string> cones,
                 const std::string &params_file, std::size_t k) {
    const double tol = tol_or(g, 1e-8);
    if (cones.empty()) cones = {"cone-a-54"};
    const Decomposition d = load_decomposition_preset(label, tiling);
    const ParameterSet p = draw_or_load(g, params_file);
    const double s = scale_factor(load_grammar_preset(tiling));

    const Bindings composites = build_composites(d, p).tensors;
    std::vector<Superoperator> ops;
    bool channel_ok = true;
    for (const auto &name : cones) {
        try {
            ops.push_back(build_descending(composites, load_cone_preset(name), tol));
        } catch (const SuperopError &e) {
            std::cout << name << ": " << e.what() << "\n";
            return kViolation;
        }
    }
    const Superoperator op = average_superoperator(ops, std::vector<double>(ops.size(), 1.0 / ops.size()));
    const double tp = trace_preservation_defect(op);
    const double cp = choi_min_eigenvalue(op);
    const double rad = spectral_radius(op, tol);
    channel_ok = tp <= tol && cp >= -tol && std::abs(rad - 1.0) <= 1e-6;
    const ScalingSpectrum spec = scaling_spectrum(op, s, k, tol);

    std::cout << "decomposition " << d.name << ", cones";
    for (const auto &c : cones) std::cout << " " << c;
    std::cout << ", s " << fmt(s) << "\n";
    std::cout << "trace defect " << fmt(tp) << ", min Choi eigenvalue " << fmt(cp) << ", spectral radius " << fmt(rad)
              << "\n";
    json rows = json::array();
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        std::cout << "  " << i << "  |lambda| " << fmt(std::abs(spec.eigenvalues[i])) << "  Delta " << fmt(spec.dimensions[i])
                  << "\n";
        rows.push_back({{"index", i},
                        {"lambda", {spec.eigenvalues[i].real(), spec.eigenvalues[i].imag()}},
                        {"delta", std::isfinite(spec.dimensions[i]) ? json(spec.dimensions[i]) : json("inf")}});
    }
    emit(g, {{"decomposition", d.name},
             {"cones", cones},
             {"params", params_to_json(p)},
             {"scale_factor", s},
             {"trace_defect", tp},
             {"choi_min_eigenvalue", cp},
             {"spectral_radius", rad},
             {"spectrum", rows}});
    return channel_ok ? kOk : kViolation;
}

// trials -------------------------------------------------------------------

int cmd_trials(const Globals &g, const std::string &config_file, const std::string &preset, std::optional<int> trials) {
    if (!g.seed) throw BadInput("--seed is required for trials");
    ExperimentConfig c = config_file.empty() ? load_experiment_preset(preset) : load_config(config_file);
    c.base_seed = *g.seed;
    c.threads = g.threads;
    if (trials) {
        if (*trials < 1) throw BadInput("--trials must be at least 1");
        c.trials = *trials;
    }
    if (g.tol) c.tol = *g.tol;
    const Campaign camp = run_campaign(c);
    for (const auto &s : camp.summaries) {
        std::cout << s.decomposition << ": " << s.trials << " trials, " << s.failed << " failed, max |Delta_0| "
                  << fmt(s.max_abs_delta0) << "\n";
        for (std::size_t i = 1; i < std::min<std::size_t>(3, s.envelopes.size()); ++i) {
            const auto &e = s.envelopes[i];
            std::cout << "  Delta_" << i << " in [" << fmt(e.min) << ", " << fmt(e.max) << "], mean " << fmt(e.mean)
                      << "\n";
        }
        for (const auto &k : s.containments) {
            std::cout << "  " << k.target.label << " (" << k.target.delta().str() << " at index " << k.target.index
                      << "): " << (k.contained ? "inside" : "outside") << "\n";
        }
    }
    if (!g.out.empty()) {
        write_outputs(camp, g.out);
        std::cout << "wrote " << g.out << "\n";
    }
    return kOk;
}

// kac ----------------------------------------------------------------------

int cmd_kac(const Globals &g, int p_prime, int q_prime, std::optional<int> r, std::optional<int> s) {
    json doc = {{"model", {p_prime, q_prime}}};
    if (r || s) {
        if (!r || !s) throw BadInput("--r and --s go together");
        const Rational h = kac_dimension(p_prime, q_prime, *r, *s);
        std::cout << "h(" << *r << "," << *s << ") = " << h.str() << ", Delta = " << (2 * h).str() << "\n";
        doc["h"] = h.str();
        doc["delta"] = (2 * h).str();
        emit(g, doc);
        return kOk;
    }
    std::cout << "M(" << p_prime << "," << q_prime << ")\n";
    for (const auto &e : kac_table(p_prime, q_prime)) {
        std::cout << "  (" << e.r << "," << e.s << ")  h " << e.h.str() << "  Delta " << e.delta.str() << "\n";
        doc["table"].push_back({{"r", e.r}, {"s", e.s}, {"h", e.h.str()}, {"delta", e.delta.str()}});
    }
    emit(g, doc);
    return kOk;
}

// perfect-check / push -------------------------------------------------------

int cmd_perfect(const Globals &g, const std::string &tensor_file, const std::string &builtin) {
    const double tol = tol_or(g, 1e-10);
    Tensor t;
    std::string id;
    if (!builtin.empty()) {
        if (builtin != "ame43") throw BadInput("unknown built-in tensor '" + builtin + "'");
        t = ame_4_3();
        id = builtin;
    } else if (!tensor_file.empty()) {
        t = load_tensor(tensor_file);
        id = tensor_file;
    } else {
        throw BadInput("give --tensor FILE or --builtin ame43");
    }
    if (t.rank() % 2 != 0) throw BadInput("perfect-check needs an even number of legs");
    const PerfectCheckResult r = perfect_check(t, tol, id);
    json doc = {{"id", r.id}, {"is_perfect", r.is_perfect}, {"tol", tol}};
    for (const auto &b : r.bipartitions) {
        std::cout << "  {";
        for (std::size_t i = 0; i < b.legs.size(); ++i) std::cout << (i ? "," : "") << b.legs[i];
        std::cout << "}  defect " << fmt(b.defect) << "  c " << fmt(b.constant) << "\n";
        doc["bipartitions"].push_back(
            {{"legs", b.legs}, {"defect", std::isfinite(b.defect) ? json(b.defect) : json("inf")}, {"constant", b.constant}});
    }
    std::cout << id << ": " << (r.is_perfect ? "perfect" : "not perfect") << "\n";
    emit(g, doc);
    return r.is_perfect ? kOk : kViolation;
}

int cmd_push(const Globals &g, const std::string &op_file, const std::string &tensor_file, std::vector<std::string> in_legs) {
    const double tol = tol_or(g, 1e-8);
    const MatrixView op = load_matrix(op_file);
    const Tensor t = load_tensor(tensor_file);
    if (in_legs.empty()) {
        in_legs.assign(t.legs().begin() + static_cast<std::ptrdiff_t>(t.rank() / 2), t.legs().end());
    }
    for (const auto &l : in_legs)
        if (!t.has_leg(l)) throw BadInput("tensor has no leg '" + l + "'");
    MatrixView out;
    try {
        out = push_operator(op, t, in_legs, tol);
    } catch (const TensorError &e) {
        std::cerr << "push: " << e.what() << "\n";
        return std::string(e.what()).find("isometry") != std::string::npos ? kViolation : kBadInput;
    }
    const json doc = matrix_to_json(out);
    if (g.out.empty()) {
        std::cout << doc.dump() << "\n";
    } else {
        emit(g, doc);
    }
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"hymera: hyperinvariant tensor network laboratory"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--tol", g.tol, "Tolerance (default 1e-10 for algebraic checks, 1e-8 for channel checks)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Random seed; required by randomized verbs");
    app.add_option("--out", g.out, "Output file (directory for trials)");
    app.add_option("--threads", g.threads, "Worker threads for trials")->check(CLI::Range(1u, 1024u));
    app.fallthrough();

    std::string label = "YQR", tiling = "54", params_file;
    std::vector<std::string> zero_specs;
    auto *verify = app.add_subcommand("verify", "Check constituent and composite constraints");
    verify->add_option("--decomposition,-d", label, "Decomposition label or preset name")->capture_default_str();
    verify->add_option("--tiling", tiling, "54 or 73")->capture_default_str();
    verify->add_option("--params", params_file, "JSON file with theta1..theta9");
    verify->add_option("--zero-entry", zero_specs, "Corrupt a constituent: FAMILY:ROW:COL");

    std::string word = "a";
    int layers = 1;
    bool do_deflate = false;
    auto *inflate_cmd = app.add_subcommand("inflate", "Inflate (or deflate) a boundary word");
    inflate_cmd->add_option("--tiling", tiling, "54 or 73")->capture_default_str();
    inflate_cmd->add_option("--word", word, "Seed word over {a,b}")->capture_default_str();
    inflate_cmd->add_option("--layers", layers, "Inflation steps")->capture_default_str();
    inflate_cmd->add_flag("--deflate", do_deflate, "Deflate the word once instead");

    std::vector<std::string> cones;
    std::size_t k = 8;
    auto *spectrum = app.add_subcommand("spectrum", "Build a descending superoperator and its scaling dimensions");
    spectrum->add_option("--decomposition,-d", label, "Decomposition label or preset name")->capture_default_str();
    spectrum->add_option("--tiling", tiling, "54 or 73")->capture_default_str();
    spectrum->add_option("--cone", cones, "Cone preset(s); several are averaged uniformly");
    spectrum->add_option("--params", params_file, "JSON file with theta1..theta9");
    spectrum->add_option("-k", k, "Number of eigenvalues kept")->capture_default_str()->check(CLI::PositiveNumber);

    std::string config_file, preset = "envelopes-54";
    std::optional<int> trials;
    auto *trials_cmd = app.add_subcommand("trials", "Run a randomized trial campaign");
    trials_cmd->add_option("--config", config_file, "Experiment config JSON");
    trials_cmd->add_option("--preset", preset, "Shipped experiment preset")->capture_default_str();
    trials_cmd->add_option("--trials", trials, "Override the trial count");

    int pp = 4, qq = 3;
    std::optional<int> kr, ks;
    auto *kac = app.add_subcommand("kac", "Kac table of a minimal model");
    kac->add_option("--p", pp, "p'")->capture_default_str();
    kac->add_option("--q", qq, "q'")->capture_default_str();
    kac->add_option("--r", kr, "Single label r");
    kac->add_option("--s", ks, "Single label s");

    std::string tensor_file, builtin;
    auto *perfect = app.add_subcommand("perfect-check", "Test a tensor for perfection across all bipartitions");
    perfect->add_option("--tensor", tensor_file, "Tensor JSON file");
    perfect->add_option("--builtin", builtin, "Built-in tensor: ame43");

    std::string op_file;
    std::vector<std::string> in_legs;
    auto *push = app.add_subcommand("push", "Push an operator through an isometric tensor");
    push->add_option("--operator", op_file, "Operator JSON file")->required();
    push->add_option("--tensor", tensor_file, "Tensor JSON file")->required();
    push->add_option("--in-legs", in_legs, "Legs the operator acts on (default: second half)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (*verify) return cmd_verify(g, label, tiling, params_file, zero_specs);
        if (*inflate_cmd) return cmd_inflate(g, tiling, word, layers, do_deflate);
        if (*spectrum) return cmd_spectrum(g, label, tiling, cones, params_file, k);
        if (*trials_cmd) return cmd_trials(g, config_file, preset, trials);
        if (*kac) return cmd_kac(g, pp, qq, kr, ks);
        if (*perfect) return cmd_perfect(g, tensor_file, builtin);
        if (*push) return cmd_push(g, op_file, tensor_file, in_legs);
    } catch (const BadInput &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const EigenSolverError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kViolation;
    } catch (const SuperopError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kViolation;
    } catch (const TilingError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception &e) {
        // Config, schema, parameter and file errors.
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
