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

#include "hymera/io.h"

#include <fstream>
#include <nlohmann/json.hpp>

namespace hymera {

using nlohmann::json;

namespace {

cplx entry(const json &v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
    throw IoError("entries must be numbers or [re, im] pairs");
}

json entries(const std::vector<cplx> &data) {
    json out = json::array();
    for (const auto &z : data) out.push_back(json::array({z.real(), z.imag()}));
    return out;
}

}  // namespace

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw IoError("cannot parse " + path.string() + ": " + e.what());
    }
}

json tensor_to_json(const Tensor &t) { return {{"legs", t.legs()}, {"shape", t.shape()}, {"data", entries(t.data())}}; }

Tensor tensor_from_json(const json &j) {
    try {
        auto legs = j.at("legs").get<std::vector<std::string>>();
        auto shape = j.at("shape").get<std::vector<std::size_t>>();
        std::vector<cplx> data;
        for (const auto &v : j.at("data")) data.push_back(entry(v));
        return Tensor(std::move(shape), std::move(legs), std::move(data));
    } catch (const json::exception &e) {
        throw IoError(std::string("malformed tensor: ") + e.what());
    } catch (const TensorError &e) {
        throw IoError(std::string("invalid tensor: ") + e.what());
    }
}

Tensor load_tensor(const std::filesystem::path &path) { return tensor_from_json(read_json_file(path)); }

json matrix_to_json(const MatrixView &m) { return {{"rows", m.rows}, {"cols", m.cols}, {"data", entries(m.data)}}; }

MatrixView matrix_from_json(const json &j) {
    try {
        std::vector<cplx> data;
        if (j.is_array()) {
            const std::size_t rows = j.size();
            const std::size_t cols = rows == 0 ? 0 : j[0].size();
            for (const auto &row : j) {
                if (row.size() != cols) throw IoError("operator rows differ in length");
                for (const auto &v : row) data.push_back(entry(v));
            }
            if (rows == 0 || cols == 0) throw IoError("empty operator");
            return MatrixView::from_rows(rows, cols, std::move(data));
        }
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        for (const auto &v : j.at("data")) data.push_back(entry(v));
        if (data.size() != rows * cols || rows == 0) throw IoError("operator data does not match rows x cols");
        return MatrixView::from_rows(rows, cols, std::move(data));
    } catch (const json::exception &e) {
        throw IoError(std::string("malformed operator: ") + e.what());
    }
}

MatrixView load_matrix(const std::filesystem::path &path) { return matrix_from_json(read_json_file(path)); }

ParameterSet params_from_json(const json &j) {
    if (!j.is_object()) throw IoError("parameters must be a JSON object");
    ParameterSet p;
    for (const auto &[k, v] : j.items()) {
        if (k.rfind("theta", 0) != 0) throw IoError("unknown parameter '" + k + "'");
        int idx = 0;
        try {
            idx = std::stoi(k.substr(5));
        } catch (const std::exception &) {
            throw IoError("unknown parameter '" + k + "'");
        }
        if (idx < 1 || idx > 9 || k != "theta" + std::to_string(idx)) throw IoError("unknown parameter '" + k + "'");
        if (!v.is_number()) throw IoError("parameter '" + k + "' must be a number");
        p.set(idx, v.get<double>());
    }
    return p;
}

json params_to_json(const ParameterSet &p) {
    json j = json::object();
    for (const auto &[i, v] : p.theta) j["theta" + std::to_string(i)] = v;
    return j;
}

}  // namespace hymera
