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

#include "rec/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "rec/common.hpp"
#include "rec/csv.hpp"
#include "rec/version.hpp"

namespace rec {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::size_t n = 0; n < size; ++n) {
    hash ^= bytes[n];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file for hashing: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t n = 0; n < got; ++n) {
      hash ^= static_cast<unsigned char>(buffer[n]);
      hash *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  return hash;
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<ManifestEntry>& files) {
  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["files"] = nlohmann::ordered_json::array();
  for (const ManifestEntry& entry : files) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(entry.hash));
    doc["files"].push_back({{"role", entry.role}, {"path", entry.path}, {"hash", hex}});
  }
  std::vector<std::string> lines{doc.dump(2)};
  csv::write_lines(path, lines);
}

}  // namespace rec
