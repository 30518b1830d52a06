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

#include "hymera/tiling.h"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "hymera/composition.h"

namespace hymera {

namespace {

void check_word(const std::string &w, const char *what) {
    for (char c : w) {
        if (c != 'a' && c != 'b') throw TilingError(std::string(what) + " contains letter '" + c + "' outside {a,b}");
    }
}

}  // namespace

const std::string &InflationGrammar::rule(char letter) const {
    if (letter == 'a') return rule_a;
    if (letter == 'b') return rule_b;
    throw TilingError(std::string("no rule for letter '") + letter + "'");
}

InflationGrammar make_grammar(int p, int q, std::string rule_a, std::string rule_b) {
    if (rule_a.empty() || rule_b.empty()) throw TilingError("rule images must be non-empty");
    check_word(rule_a, "rule a");
    check_word(rule_b, "rule b");
    InflationGrammar g;
    g.p = p;
    g.q = q;
    g.rule_a = std::move(rule_a);
    g.rule_b = std::move(rule_b);
    const auto ca = letter_counts(g.rule_a), cb = letter_counts(g.rule_b);
    g.matrix = {{{ca[0], cb[0]}, {ca[1], cb[1]}}};
    return g;
}

InflationGrammar grammar_from_json(const nlohmann::json &j) {
    try {
        const auto &r = j.at("rules");
        return make_grammar(j.at("p").get<int>(), j.at("q").get<int>(), r.at("a").get<std::string>(),
                            r.at("b").get<std::string>());
    } catch (const nlohmann::json::exception &e) {
        throw TilingError(std::string("malformed grammar: ") + e.what());
    }
}

InflationGrammar load_grammar(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw TilingError("cannot open grammar file " + path.string());
    try {
        return grammar_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error &e) {
        throw TilingError(path.string() + ": " + e.what());
    }
}

InflationGrammar load_grammar_preset(const std::string &tiling) {
    const auto path = preset_dir() / "grammars" / (tiling + ".json");
    if (!std::filesystem::exists(path)) throw TilingError("unknown tiling preset '" + tiling + "'");
    return load_grammar(path);
}

BoundaryWord inflate(const BoundaryWord &w, const InflationGrammar &g) {
    check_word(w.letters, "word");
    BoundaryWord out;
    out.layer = w.layer + 1;
    for (char c : w.letters) out.letters += g.rule(c);
    return out;
}

BoundaryWord inflate_n(BoundaryWord w, const InflationGrammar &g, int times) {
    for (int i = 0; i < times; ++i) w = inflate(w, g);
    return w;
}

BoundaryWord deflate(const BoundaryWord &w, const InflationGrammar &g) {
    check_word(w.letters, "word");
    // Longest image first, so that 'abaab' wins over 'ab' at the same offset.
    std::vector<std::pair<char, const std::string *>> rules = {{'a', &g.rule_a}, {'b', &g.rule_b}};
    if (g.rule_b.size() > g.rule_a.size()) std::swap(rules[0], rules[1]);

    const std::string &s = w.letters;
    std::vector<std::size_t> choice;  // index into rules per segment
    std::vector<std::size_t> start;   // offsets of the segments
    std::size_t pos = 0, next_rule = 0;
    while (pos < s.size()) {
        bool matched = false;
        for (std::size_t r = next_rule; r < rules.size(); ++r) {
            const std::string &img = *rules[r].second;
            if (s.compare(pos, img.size(), img) == 0) {
                choice.push_back(r);
                start.push_back(pos);
                pos += img.size();
                next_rule = 0;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (choice.empty()) {
            throw TilingError("'" + s + "' is not an inflation image (no parse from offset " + std::to_string(pos) + ")");
        }
        pos = start.back();
        next_rule = choice.back() + 1;
        choice.pop_back();
        start.pop_back();
    }
    BoundaryWord out;
    out.layer = w.layer - 1;
    for (auto r : choice) out.letters += rules[r].first;
    return out;
}

std::uint64_t count_parses(const std::string &letters, const InflationGrammar &g) {
    std::vector<std::uint64_t> ways(letters.size() + 1, 0);
    ways[letters.size()] = 1;
    for (std::size_t i = letters.size(); i-- > 0;) {
        for (const std::string *img : {&g.rule_a, &g.rule_b}) {
            if (letters.compare(i, img->size(), *img) == 0) ways[i] += ways[i + img->size()];
        }
    }
    return ways[0];
}

LetterCounts letter_counts(const std::string &letters) {
    LetterCounts c{0, 0};
    for (char ch : letters) {
        if (ch == 'a') ++c[0];
        else if (ch == 'b') ++c[1];
        else throw TilingError(std::string("letter '") + ch + "' outside {a,b}");
    }
    return c;
}

CountMatrix matrix_power(const CountMatrix &m, int n) {
    if (n < 0) throw TilingError("negative matrix power");
    CountMatrix r = {{{1, 0}, {0, 1}}};
    for (int k = 0; k < n; ++k) {
        CountMatrix t{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t[i][j] = r[i][0] * m[0][j] + r[i][1] * m[1][j];
        r = t;
    }
    return r;
}

LetterCounts apply_counts(const CountMatrix &m, const LetterCounts &v) {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

bool is_primitive(const CountMatrix &m) {
    // Wielandt: an n x n primitive matrix has M^((n-1)^2 + 1) > 0.
    const CountMatrix m2 = matrix_power(m, 2);
    for (const auto &row : m2)
        for (auto v : row)
            if (v <= 0) return false;
    return true;
}

double scale_factor(const InflationGrammar &g) {
    if (!is_primitive(g.matrix)) throw TilingError("inflation matrix is not primitive");
    const double tr = static_cast<double>(g.matrix[0][0] + g.matrix[1][1]);
    const double det = static_cast<double>(g.matrix[0][0] * g.matrix[1][1] - g.matrix[0][1] * g.matrix[1][0]);
    return 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
}

CouplingSequence make_couplings(const std::string &letters, double j_a, double j_b) {
    if (!(j_b > j_a && j_a > 0.0)) throw TilingError("couplings must satisfy J_b > J_a > 0");
    check_word(letters, "word");
    CouplingSequence c;
    c.letters = letters;
    c.j_a = j_a;
    c.j_b = j_b;
    for (char ch : letters) c.couplings.push_back(ch == 'a' ? j_a : j_b);
    return c;
}

CouplingSequence renormalize_couplings(const CouplingSequence &c, const InflationGrammar &g, const CouplingMap &map) {
    const BoundaryWord parent = deflate({c.letters, 0}, g);
    auto [ja, jb] = map ? map(c.j_a, c.j_b) : std::make_pair(c.j_a, c.j_b);
    return make_couplings(parent.letters, ja, jb);
}

}  // namespace hymera
