/*
 * Copyright 2026 The BDFL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bdfl/federation/transcript.h"

#include <fstream>
#include <json.hpp>

#include "bdfl/error.h"

namespace bdfl::federation {

void Transcript::Append(TranscriptRecord record) {
  std::lock_guard lock(mu_);
  const auto key = std::make_pair(record.round, record.step);
  if (!records_.emplace(key, std::move(record)).second) {
    throw ProtocolError("duplicate message at round " +
                        std::to_string(key.first) + ", step " +
                        std::to_string(key.second));
  }
}

std::vector<TranscriptRecord> Transcript::Records() const {
  std::lock_guard lock(mu_);
  std::vector<TranscriptRecord> out;
  out.reserve(records_.size());
  for (const auto& [key, rec] : records_) out.push_back(rec);
  return out;
}

std::uint64_t Transcript::TotalBytes() const {
  std::lock_guard lock(mu_);
  std::uint64_t total = 0;
  for (const auto& [key, rec] : records_) total += rec.bytes;
  return total;
}

std::uint64_t Transcript::BytesInRound(std::int64_t round) const {
  std::lock_guard lock(mu_);
  std::uint64_t total = 0;
  for (auto it = records_.lower_bound({round, 0});
       it != records_.end() && it->first.first == round; ++it) {
    total += it->second.bytes;
  }
  return total;
}

std::string Transcript::ToJsonl() const {
  std::string out;
  for (const auto& rec : Records()) {
    nlohmann::ordered_json j = {{"round", rec.round},
                                {"from", RoleName(rec.from)},
                                {"to", RoleName(rec.to)},
                                {"kind", KindName(rec.kind)},
                                {"bytes", rec.bytes},
                                {"payload_digest", rec.payload_digest}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

void Transcript::WriteJsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write transcript " + path.string());
  out << ToJsonl();
}

TranscriptRecord MakeRecord(const Message& m, const WireFrame& frame) {
  TranscriptRecord rec;
  rec.round = m.round;
  rec.step = ProtocolStep(m);
  rec.from = m.from;
  rec.to = m.to;
  rec.kind = m.kind();
  rec.bytes = frame.bytes.size();
  rec.payload_digest = frame.payload_digest;
  rec.sent_at = std::chrono::system_clock::now();
  return rec;
}

}  // namespace bdfl::federation
