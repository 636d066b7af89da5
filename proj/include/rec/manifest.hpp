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
// Run manifests: content hashes of the files a run read and wrote, plus the
// flags and tool version, so any run can be audited and replayed.

#ifndef RECSETTLE_MANIFEST_HPP_
#define RECSETTLE_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rec {

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(const void* data, std::size_t size);

// Hash of a whole file's bytes; throws InputError when unreadable.
std::uint64_t hash_file(const std::string& path);

struct ManifestEntry {
  std::string role;  // e.g. "input:meters", "output:keys"
  std::string path;
  std::uint64_t hash = 0;
};

// Writes `path` as JSON: {"version", "command", "files":[{role,path,hash}]}.
// Hashes are fixed-width lowercase hex.  Deterministic for identical inputs.
void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<ManifestEntry>& files);

}  // namespace rec

#endif  // RECSETTLE_MANIFEST_HPP_
