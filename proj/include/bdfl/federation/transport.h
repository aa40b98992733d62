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

#ifndef BDFL_FEDERATION_TRANSPORT_H_
#define BDFL_FEDERATION_TRANSPORT_H_

#include <array>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <string>

#include "bdfl/federation/message.h"

namespace bdfl::federation {

// Moves serialized frames between parties. Delivery is FIFO per
// (sender, receiver) pair.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void Send(PartyRole from, PartyRole to, std::string frame) = 0;
  // Blocks until a frame addressed to `me` is available.
  virtual std::string Receive(PartyRole me) = 0;
};

// One mailbox per party inside a single process. Safe for concurrent use by
// party threads; TryReceive lets a single-threaded scheduler poll.
class InProcessTransport : public Transport {
 public:
  void Send(PartyRole from, PartyRole to, std::string frame) override;
  std::string Receive(PartyRole me) override;
  std::optional<std::string> TryReceive(PartyRole me);
  // Wakes every blocked receiver; later Receive calls on empty mailboxes
  // throw ProtocolError.
  void Shutdown();

 private:
  struct Mailbox {
    std::mutex mu;
    std::condition_variable ready;
    std::deque<std::string> frames;
  };
  Mailbox& box(PartyRole role) { return boxes_[static_cast<int>(role)]; }

  std::array<Mailbox, 3> boxes_;
  std::atomic<bool> shutdown_{false};
};

}  // namespace bdfl::federation

#endif  // BDFL_FEDERATION_TRANSPORT_H_
