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

#ifndef HYMERA_TILING_H
#define HYMERA_TILING_H

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hymera {

struct TilingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using CountMatrix = std::array<std::array<std::int64_t, 2>, 2>;
using LetterCounts = std::array<std::int64_t, 2>;

/// Substitution rules over {a, b}. matrix[x][y] counts letter x in rules[y]
/// (index 0 = a, 1 = b).
struct InflationGrammar {
    int p = 0;
    int q = 0;
    std::string rule_a;
    std::string rule_b;
    CountMatrix matrix{};

    const std::string &rule(char letter) const;
};

InflationGrammar make_grammar(int p, int q, std::string rule_a, std::string rule_b);
InflationGrammar grammar_from_json(const nlohmann::json &j);
InflationGrammar load_grammar(const std::filesystem::path &path);
/// "54" or "73" from the shipped presets.
InflationGrammar load_grammar_preset(const std::string &tiling);

struct BoundaryWord {
    std::string letters;
    int layer = 0;
};

BoundaryWord inflate(const BoundaryWord &w, const InflationGrammar &g);
BoundaryWord inflate_n(BoundaryWord w, const InflationGrammar &g, int times);

/// Inverse substitution. Segments are matched leftmost-longest with
/// backtracking; throws TilingError when w is not an inflation image.
BoundaryWord deflate(const BoundaryWord &w, const InflationGrammar &g);
/// Number of distinct segmentations of w into rule images.
std::uint64_t count_parses(const std::string &letters, const InflationGrammar &g);

LetterCounts letter_counts(const std::string &letters);
CountMatrix matrix_power(const CountMatrix &m, int n);
LetterCounts apply_counts(const CountMatrix &m, const LetterCounts &v);
bool is_primitive(const CountMatrix &m);

/// Perron-Frobenius eigenvalue of the inflation matrix.
double scale_factor(const InflationGrammar &g);

/// One coupling per letter: J_a on a, J_b on b, J_b > J_a > 0.
struct CouplingSequence {
    std::string letters;
    double j_a = 0.0;
    double j_b = 0.0;
    std::vector<double> couplings;
};

CouplingSequence make_couplings(const std::string &letters, double j_a, double j_b);

/// (J_a, J_b) -> (J_a', J_b').
using CouplingMap = std::function<std::pair<double, double>(double, double)>;

/// Couplings over the deflated word, relabelled through `map` (identity when
/// empty).
CouplingSequence renormalize_couplings(const CouplingSequence &c, const InflationGrammar &g,
                                       const CouplingMap &map = {});

}  // namespace hymera

#endif
