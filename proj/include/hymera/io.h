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

#ifndef HYMERA_IO_H
#define HYMERA_IO_H

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "hymera/constituents.h"
#include "hymera/tensor.h"

namespace hymera {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tensor files: {"legs": [...], "shape": [...], "data": [...]} with data in
/// row-major leg order. An entry is a number or a [re, im] pair.
nlohmann::json tensor_to_json(const Tensor &t);
Tensor tensor_from_json(const nlohmann::json &j);
Tensor load_tensor(const std::filesystem::path &path);

/// Operator files: {"rows": n, "cols": m, "data": [...]}, or a bare array of
/// rows.
nlohmann::json matrix_to_json(const MatrixView &m);
MatrixView matrix_from_json(const nlohmann::json &j);
MatrixView load_matrix(const std::filesystem::path &path);

/// {"theta1": x, ..., "theta9": y}; missing indices are left unset.
ParameterSet params_from_json(const nlohmann::json &j);
nlohmann::json params_to_json(const ParameterSet &p);

nlohmann::json read_json_file(const std::filesystem::path &path);

}  // namespace hymera

#endif
