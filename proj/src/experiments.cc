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

#include "hymera/experiments.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <thread>

#include "hymera/tiling.h"

namespace hymera {

using nlohmann::json;

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json encode(double v) {
    if (std::isfinite(v)) return v;
    return num(v);
}

double decode(const json &j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw ExperimentError("bad number '" + s + "'");
    }
    return j.get<double>();
}

json target_to_json(const CftTarget &t) {
    return {{"label", t.label}, {"model", {t.p_prime, t.q_prime}}, {"rs", {t.r, t.s}}, {"index", t.index}};
}

CftTarget target_from_json(const json &j) {
    CftTarget t;
    t.label = j.at("label").get<std::string>();
    const auto &m = j.at("model");
    const auto &rs = j.at("rs");
    if (m.size() != 2 || rs.size() != 2) throw ExperimentError("target '" + t.label + "' needs model [p',q'] and rs [r,s]");
    t.p_prime = m[0].get<int>();
    t.q_prime = m[1].get<int>();
    t.r = rs[0].get<int>();
    t.s = rs[1].get<int>();
    t.index = j.value("index", std::size_t{1});
    // Rejects labels outside the Kac table up front.
    (void)t.delta();
    return t;
}

}  // namespace

Rational CftTarget::delta() const { return 2 * kac_dimension(p_prime, q_prime, r, s); }

ExperimentConfig config_from_json(const json &j) {
    ExperimentConfig c;
    try {
        if (j.contains("decompositions")) c.decompositions = j.at("decompositions").get<std::vector<std::string>>();
        if (j.contains("decomposition")) c.decompositions = {j.at("decomposition").get<std::string>()};
        c.tiling = j.value("tiling", c.tiling);
        if (j.contains("cones")) c.cones = j.at("cones").get<std::vector<std::string>>();
        if (j.contains("weights")) c.weights = j.at("weights").get<std::vector<double>>();
        c.weighting = j.value("weighting", c.weighting);
        c.boundary_layers = j.value("boundary_layers", c.boundary_layers);
        c.trials = j.value("trials", c.trials);
        c.base_seed = j.value("base_seed", c.base_seed);
        c.k = j.value("k", c.k);
        c.threads = j.value("threads", c.threads);
        c.tol = j.value("tol", c.tol);
        if (j.contains("theta_ranges")) {
            const auto &r = j.at("theta_ranges");
            if (r.contains("angle")) {
                c.ranges.angle_lo = r.at("angle").at(0).get<double>();
                c.ranges.angle_hi = r.at("angle").at(1).get<double>();
            }
            if (r.contains("real")) {
                c.ranges.real_lo = r.at("real").at(0).get<double>();
                c.ranges.real_hi = r.at("real").at(1).get<double>();
            }
        }
        if (j.contains("targets")) {
            for (const auto &t : j.at("targets")) c.targets.push_back(target_from_json(t));
        }
    } catch (const json::exception &e) {
        throw ExperimentError(std::string("malformed experiment config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ExperimentError(std::string("bad experiment target: ") + e.what());
    }
    if (c.decompositions.empty()) throw ExperimentError("config lists no decompositions");
    if (c.cones.empty()) throw ExperimentError("config lists no cones");
    if (c.trials < 1) throw ExperimentError("trials must be at least 1");
    if (c.k < 1) throw ExperimentError("k must be at least 1");
    if (c.threads < 1) throw ExperimentError("threads must be at least 1");
    if (!c.weights.empty() && c.weights.size() != c.cones.size()) {
        throw ExperimentError("weights must match the number of cones");
    }
    if (c.weighting != "uniform" && c.weighting != "boundary") {
        throw ExperimentError("unknown weighting '" + c.weighting + "'");
    }
    if (!(c.ranges.angle_lo <= c.ranges.angle_hi) || !(c.ranges.real_lo <= c.ranges.real_hi)) {
        throw ExperimentError("theta ranges must satisfy lo <= hi");
    }
    return c;
}

json config_to_json(const ExperimentConfig &c) {
    json targets = json::array();
    for (const auto &t : c.targets) targets.push_back(target_to_json(t));
    json j = {{"decompositions", c.decompositions},
              {"tiling", c.tiling},
              {"cones", c.cones},
              {"weighting", c.weighting},
              {"boundary_layers", c.boundary_layers},
              {"trials", c.trials},
              {"base_seed", c.base_seed},
              {"k", c.k},
              {"tol", c.tol},
              {"theta_ranges",
               {{"angle", {c.ranges.angle_lo, c.ranges.angle_hi}}, {"real", {c.ranges.real_lo, c.ranges.real_hi}}}},
              {"targets", targets}};
    if (!c.weights.empty()) j["weights"] = c.weights;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ExperimentError("cannot open experiment config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ExperimentError("cannot parse " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig load_experiment_preset(const std::string &name) {
    const auto path = preset_dir() / "experiments" / (name + ".json");
    if (!std::filesystem::exists(path)) throw ExperimentError("unknown experiment preset '" + name + "'");
    return load_config(path);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t z = base_seed + index + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> cone_weights(const ExperimentConfig &c, const std::vector<ContractionSchema> &cones) {
    const std::size_t n = cones.size();
    if (n == 0) throw ExperimentError("no cones");
    std::vector<double> w;
    if (!c.weights.empty()) {
        if (c.weights.size() != n) throw ExperimentError("weights must match the number of cones");
        w = c.weights;
    } else if (c.weighting == "boundary") {
        const InflationGrammar g = load_grammar_preset(c.tiling);
        const auto counts = letter_counts(inflate_n({"a", 0}, g, c.boundary_layers).letters);
        const double total = static_cast<double>(counts[0] + counts[1]);
        std::array<int, 2> per_letter{0, 0};
        std::vector<int> letter(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto it = cones[i].attributes.find("root_letter");
            letter[i] = it == cones[i].attributes.end() ? 0 : static_cast<int>(it->second);
            if (letter[i] != 0 && letter[i] != 1) throw ExperimentError("root_letter must be 0 or 1");
            ++per_letter[letter[i]];
        }
        // Letters no cone covers hand their share to the other letter.
        for (std::size_t i = 0; i < n; ++i) {
            const int l = letter[i];
            const double freq = per_letter[1 - l] == 0 ? 1.0 : static_cast<double>(counts[l]) / total;
            w.push_back(freq / per_letter[l]);
        }
    } else {
        w.assign(n, 1.0 / static_cast<double>(n));
    }
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw ExperimentError("cone weights must be non-negative");
        sum += x;
    }
    if (!(sum > 0.0)) throw ExperimentError("cone weights sum to zero");
    for (double &x : w) x /= sum;
    return w;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig &c, const std::string &decomposition) {
    if (c.trials < 1) throw ExperimentError("trials must be at least 1");
    Decomposition d;
    std::vector<ContractionSchema> cones;
    double s = 0.0;
    try {
        d = load_decomposition_preset(decomposition, c.tiling);
        for (const auto &name : c.cones) cones.push_back(load_cone_preset(name));
        s = scale_factor(load_grammar_preset(c.tiling));
    } catch (const std::exception &e) {
        throw ExperimentError(e.what());
    }
    const std::vector<double> weights = cone_weights(c, cones);

    std::vector<TrialRecord> out(static_cast<std::size_t>(c.trials));
    auto run_one = [&](std::size_t i) {
        TrialRecord &r = out[i];
        r.trial_id = static_cast<int>(i);
        r.seed = trial_seed(c.base_seed, i);
        r.decomposition = decomposition;
        std::mt19937_64 rng(r.seed);
        r.params = sample_parameters(rng, c.ranges);
        try {
            const Bindings composites = build_composites(d, r.params).tensors;
            std::vector<Superoperator> ops;
            for (const auto &cone : cones) ops.push_back(build_descending(composites, cone, c.tol));
            r.spectrum = scaling_spectrum(average_superoperator(ops, weights), s, c.k, c.tol);
        } catch (const std::exception &e) {
            r.failed = true;
            r.error = e.what();
            r.spectrum = {};
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(c.trials)));
    if (threads == 1) {
        for (std::size_t i = 0; i < out.size(); ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < out.size(); i = next++) run_one(i);
        });
    }
    for (auto &t : pool) t.join();
    return out;
}

EnvelopeSummary summarize(const std::vector<TrialRecord> &records, const std::vector<CftTarget> &targets) {
    if (records.empty()) throw ExperimentError("cannot summarize an empty record set");
    EnvelopeSummary sum;
    sum.decomposition = records.front().decomposition;
    sum.trials = records.size();
    std::size_t k = 0;
    for (const auto &r : records) {
        if (r.decomposition != sum.decomposition) throw ExperimentError("records mix decompositions");
        if (r.failed) {
            ++sum.failed;
            continue;
        }
        k = std::max(k, r.spectrum.dimensions.size());
        if (!r.spectrum.dimensions.empty()) {
            sum.max_abs_delta0 = std::max(sum.max_abs_delta0, std::abs(r.spectrum.dimensions[0]));
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        IndexEnvelope e;
        e.index = i;
        std::vector<double> v;
        for (const auto &r : records) {
            if (r.failed || i >= r.spectrum.dimensions.size()) continue;
            const double x = r.spectrum.dimensions[i];
            if (std::isfinite(x)) {
                v.push_back(x);
            } else {
                ++e.infinite;
            }
        }
        std::sort(v.begin(), v.end());
        e.finite = v.size();
        if (v.empty()) {
            e.min = e.max = e.mean = std::numeric_limits<double>::infinity();
            e.stddev = 0.0;
        } else {
            e.min = v.front();
            e.max = v.back();
            e.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double ss = 0.0;
            for (double x : v) ss += (x - e.mean) * (x - e.mean);
            e.stddev = std::sqrt(ss / static_cast<double>(v.size()));
            // Guards min <= mean <= max against rounding in the sum.
            e.mean = std::clamp(e.mean, e.min, e.max);
        }
        sum.envelopes.push_back(e);
    }

    for (const auto &t : targets) {
        Containment c;
        c.target = t;
        c.value = t.delta().value();
        if (t.index < sum.envelopes.size() && sum.envelopes[t.index].finite > 0) {
            const auto &e = sum.envelopes[t.index];
            c.contained = e.min <= c.value && c.value <= e.max;
        }
        sum.containments.push_back(c);
    }
    return sum;
}

double envelope_separation(const EnvelopeSummary &a, const EnvelopeSummary &b, const std::vector<std::size_t> &indices) {
    double d = 0.0;
    for (auto i : indices) {
        if (i >= a.envelopes.size() || i >= b.envelopes.size()) throw ExperimentError("envelope index out of range");
        d = std::max({d, std::abs(a.envelopes[i].min - b.envelopes[i].min), std::abs(a.envelopes[i].max - b.envelopes[i].max)});
    }
    return d;
}

Campaign run_campaign(const ExperimentConfig &c) {
    Campaign out;
    out.config = c;
    for (const auto &name : c.decompositions) {
        auto records = run_trials(c, name);
        out.summaries.push_back(summarize(records, c.targets));
        out.records.emplace(name, std::move(records));
    }
    return out;
}

json summary_to_json(const Campaign &c) {
    json sums = json::array();
    const EnvelopeSummary *ref = c.summaries.empty() ? nullptr : &c.summaries.front();
    for (const auto &s : c.summaries) {
        json env = json::array();
        for (const auto &e : s.envelopes) {
            env.push_back({{"index", e.index},
                           {"min", encode(e.min)},
                           {"max", encode(e.max)},
                           {"mean", encode(e.mean)},
                           {"stddev", encode(e.stddev)},
                           {"finite", e.finite},
                           {"infinite", e.infinite}});
        }
        json cont = json::array();
        for (const auto &k : s.containments) {
            cont.push_back({{"target", target_to_json(k.target)},
                            {"delta", k.target.delta().str()},
                            {"value", k.value},
                            {"contained", k.contained}});
        }
        json js = {{"decomposition", s.decomposition},
                   {"trials", s.trials},
                   {"failed", s.failed},
                   {"max_abs_delta0", encode(s.max_abs_delta0)},
                   {"envelopes", env},
                   {"containments", cont}};
        if (ref && s.envelopes.size() > 2 && ref->envelopes.size() > 2) {
            js["separation_from_first"] = encode(envelope_separation(*ref, s, {1, 2}));
        }
        sums.push_back(js);
    }
    return {{"config", config_to_json(c.config)}, {"summaries", sums}};
}

std::vector<EnvelopeSummary> summaries_from_json(const json &j) {
    std::vector<EnvelopeSummary> out;
    try {
        for (const auto &js : j.at("summaries")) {
            EnvelopeSummary s;
            s.decomposition = js.at("decomposition").get<std::string>();
            s.trials = js.at("trials").get<std::size_t>();
            s.failed = js.at("failed").get<std::size_t>();
            s.max_abs_delta0 = decode(js.at("max_abs_delta0"));
            for (const auto &e : js.at("envelopes")) {
                IndexEnvelope ie;
                ie.index = e.at("index").get<std::size_t>();
                ie.min = decode(e.at("min"));
                ie.max = decode(e.at("max"));
                ie.mean = decode(e.at("mean"));
                ie.stddev = decode(e.at("stddev"));
                ie.finite = e.at("finite").get<std::size_t>();
                ie.infinite = e.at("infinite").get<std::size_t>();
                s.envelopes.push_back(ie);
            }
            for (const auto &k : js.at("containments")) {
                Containment c;
                c.target = target_from_json(k.at("target"));
                c.value = k.at("value").get<double>();
                c.contained = k.at("contained").get<bool>();
                s.containments.push_back(c);
            }
            out.push_back(std::move(s));
        }
    } catch (const json::exception &e) {
        throw ExperimentError(std::string("malformed summary: ") + e.what());
    }
    return out;
}

std::string results_csv(const Campaign &c) {
    std::ostringstream os;
    os << "decomposition,trial_id,seed,status";
    for (int i = 1; i <= 9; ++i) os << ",theta" << i;
    os << ",index,lambda_abs,delta\n";
    for (const auto &name : c.config.decompositions) {
        auto it = c.records.find(name);
        if (it == c.records.end()) continue;
        for (const auto &r : it->second) {
            std::ostringstream head;
            head << r.decomposition << ',' << r.trial_id << ',' << r.seed << ',' << (r.failed ? "failed" : "ok");
            for (int i = 1; i <= 9; ++i) head << ',' << (r.params.has(i) ? num(r.params.get(i)) : "");
            for (std::size_t i = 0; i < c.config.k; ++i) {
                os << head.str() << ',' << i << ',';
                if (i < r.spectrum.eigenvalues.size()) {
                    os << num(std::abs(r.spectrum.eigenvalues[i])) << ',' << num(r.spectrum.dimensions[i]);
                } else {
                    os << ',';
                }
                os << '\n';
            }
        }
    }
    return os.str();
}

std::string plot_data_csv(const std::vector<TrialRecord> &records, std::size_t k) {
    std::ostringstream os;
    os << "trial_index";
    for (std::size_t i = 0; i < k; ++i) os << ",delta_" << i;
    os << '\n';
    for (const auto &r : records) {
        if (r.failed) continue;
        os << r.trial_id;
        for (std::size_t i = 0; i < k; ++i) {
            os << ',';
            if (i < r.spectrum.dimensions.size()) os << num(r.spectrum.dimensions[i]);
        }
        os << '\n';
    }
    return os.str();
}

std::string report(const Campaign &c, const std::string &format) {
    if (format == "csv") return results_csv(c);
    if (format == "json") return summary_to_json(c).dump(2) + "\n";
    if (format == "plot-data") {
        if (c.config.decompositions.empty()) return plot_data_csv({}, c.config.k);
        auto it = c.records.find(c.config.decompositions.front());
        return plot_data_csv(it == c.records.end() ? std::vector<TrialRecord>{} : it->second, c.config.k);
    }
    throw ExperimentError("unknown report format '" + format + "'");
}

void write_outputs(const Campaign &c, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir / "plotdata");
    auto write = [](const std::filesystem::path &p, const std::string &text) {
        std::ofstream out(p);
        if (!out) throw ExperimentError("cannot write " + p.string());
        out << text;
    };
    write(dir / "results.csv", results_csv(c));
    write(dir / "summary.json", summary_to_json(c).dump(2) + "\n");
    for (const auto &[name, records] : c.records) write(dir / "plotdata" / (name + ".csv"), plot_data_csv(records, c.config.k));
}

}  // namespace hymera
