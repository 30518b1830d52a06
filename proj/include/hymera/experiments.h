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

#ifndef HYMERA_EXPERIMENTS_H
#define HYMERA_EXPERIMENTS_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "hymera/constituents.h"
#include "hymera/superop.h"

namespace hymera {

struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A CFT value to look for in the envelopes: Delta = 2 h_{r,s} of M(p', q')
/// tested against the envelope of the given spectrum index.
struct CftTarget {
    std::string label;
    int p_prime = 4;
    int q_prime = 3;
    int r = 1;
    int s = 1;
    std::size_t index = 1;

    Rational delta() const;
};

struct ExperimentConfig {
    /// Labels such as "YQR" or full preset names.
    std::vector<std::string> decompositions{"YQR"};
    std::string tiling = "54";
    std::vector<std::string> cones{"cone-a-54"};
    /// Explicit weights, one per cone. Empty means `weighting` decides.
    std::vector<double> weights;
    /// "uniform", or "boundary": cones are weighted by how often their
    /// root_letter attribute occurs on the inflated boundary.
    std::string weighting = "uniform";
    int boundary_layers = 6;
    int trials = 1000;
    std::uint64_t base_seed = 0;
    std::size_t k = 8;
    ThetaRanges ranges;
    std::vector<CftTarget> targets;
    unsigned threads = 1;
    double tol = 1e-8;
};

ExperimentConfig config_from_json(const nlohmann::json &j);
/// threads is left out: it never changes the results.
nlohmann::json config_to_json(const ExperimentConfig &c);
ExperimentConfig load_config(const std::filesystem::path &path);
ExperimentConfig load_experiment_preset(const std::string &name);

/// Stateless per-trial seed: splitmix64(base + index).
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index);

/// Cone weights after applying the config's weighting rule; sums to 1.
std::vector<double> cone_weights(const ExperimentConfig &c, const std::vector<ContractionSchema> &cones);

struct TrialRecord {
    int trial_id = 0;
    std::uint64_t seed = 0;
    std::string decomposition;
    ParameterSet params;
    ScalingSpectrum spectrum;
    bool failed = false;
    std::string error;
};

/// One decomposition, config.trials trials. Records come back in trial order
/// whatever the thread count.
std::vector<TrialRecord> run_trials(const ExperimentConfig &c, const std::string &decomposition);

struct IndexEnvelope {
    std::size_t index = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    /// Trials whose Delta at this index is finite / infinite (lambda = 0).
    std::size_t finite = 0;
    std::size_t infinite = 0;
};

struct Containment {
    CftTarget target;
    double value = 0.0;
    bool contained = false;
};

struct EnvelopeSummary {
    std::string decomposition;
    std::size_t trials = 0;
    std::size_t failed = 0;
    /// max |Delta_0| over successful trials.
    double max_abs_delta0 = 0.0;
    std::vector<IndexEnvelope> envelopes;
    std::vector<Containment> containments;
};

/// Envelopes over the successful records; the result does not depend on
/// record order. Throws ExperimentError for empty or mixed input.
EnvelopeSummary summarize(const std::vector<TrialRecord> &records, const std::vector<CftTarget> &targets);

/// Largest endpoint difference between two envelopes over the given indices.
double envelope_separation(const EnvelopeSummary &a, const EnvelopeSummary &b, const std::vector<std::size_t> &indices);

struct Campaign {
    ExperimentConfig config;
    std::map<std::string, std::vector<TrialRecord>> records;
    std::vector<EnvelopeSummary> summaries;
};

Campaign run_campaign(const ExperimentConfig &c);

/// Infinite values are written as the string "inf".
nlohmann::json summary_to_json(const Campaign &c);
std::vector<EnvelopeSummary> summaries_from_json(const nlohmann::json &j);

/// Long format: one row per (trial, spectrum index).
std::string results_csv(const Campaign &c);
/// trial_index followed by one Delta column per index, one row per trial.
std::string plot_data_csv(const std::vector<TrialRecord> &records, std::size_t k);

/// format is "csv", "json" or "plot-data" (plot data of the first
/// decomposition). Throws ExperimentError otherwise.
std::string report(const Campaign &c, const std::string &format);

/// results.csv, summary.json and plotdata/<decomposition>.csv under dir.
void write_outputs(const Campaign &c, const std::filesystem::path &dir);

}  // namespace hymera

#endif
