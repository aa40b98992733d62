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

#ifndef BDFL_FEDERATION_TRANSCRIPT_H_
#define BDFL_FEDERATION_TRANSCRIPT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "bdfl/federation/message.h"

namespace bdfl::federation {

struct TranscriptRecord {
  std::int64_t round = 0;
  int step = 0;
  PartyRole from = PartyRole::kArbiterC;
  PartyRole to = PartyRole::kArbiterC;
  MessageKind kind = MessageKind::kHalt;
  std::uint64_t bytes = 0;
  std::string payload_digest;
  // In-memory only; never written, so files stay replayable.
  std::chrono::system_clock::time_point sent_at;
};

// Serialized sink for every protocol message. Records are kept in protocol
// order (round, step) whatever the order in which concurrent parties hand
// them in, so sequential and threaded schedules yield the same transcript.
class Transcript {
 public:
  // Throws ProtocolError on a duplicate (round, step).
  void Append(TranscriptRecord record);

  std::vector<TranscriptRecord> Records() const;
  std::uint64_t TotalBytes() const;
  std::uint64_t BytesInRound(std::int64_t round) const;

  // One {"round","from","to","kind","bytes","payload_digest"} object per
  // line.
  std::string ToJsonl() const;
  void WriteJsonl(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::int64_t, int>, TranscriptRecord> records_;
};

TranscriptRecord MakeRecord(const Message& m, const WireFrame& frame);

}  // namespace bdfl::federation

#endif  // BDFL_FEDERATION_TRANSCRIPT_H_
