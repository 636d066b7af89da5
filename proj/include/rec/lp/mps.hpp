// Copyright 2026 the recsettle authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Fixed-format MPS export for solver-independent model inspection.

#pragma once

#include <string>

#include "rec/lp/model.hpp"

namespace rec::lp {

// Renders the model as classic fixed-format MPS.  Rows and columns are
// named positionally (R0000001..., C0000001...) so the text stays within
// the 8-character name fields; bounds are always written explicitly to
// avoid reader-specific defaults.
std::string to_mps(const Model& model, const std::string& name = "RECMODEL");

// Writes to_mps() output to a file; throws InputError when the file cannot
// be created.
void write_mps(const Model& model, const std::string& path,
               const std::string& name = "RECMODEL");

}  // namespace rec::lp
