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

#include "bdfl/federation/transport.h"

#include "bdfl/error.h"

namespace bdfl::federation {

void InProcessTransport::Send(PartyRole /*from*/, PartyRole to,
                              std::string frame) {
  Mailbox& b = box(to);
  {
    std::lock_guard lock(b.mu);
    b.frames.push_back(std::move(frame));
  }
  b.ready.notify_one();
}

std::string InProcessTransport::Receive(PartyRole me) {
  Mailbox& b = box(me);
  std::unique_lock lock(b.mu);
  b.ready.wait(lock, [&] { return !b.frames.empty() || shutdown_; });
  if (b.frames.empty()) throw ProtocolError("transport shut down");
  std::string frame = std::move(b.frames.front());
  b.frames.pop_front();
  return frame;
}

std::optional<std::string> InProcessTransport::TryReceive(PartyRole me) {
  Mailbox& b = box(me);
  std::lock_guard lock(b.mu);
  if (b.frames.empty()) return std::nullopt;
  std::string frame = std::move(b.frames.front());
  b.frames.pop_front();
  return frame;
}

void InProcessTransport::Shutdown() {
  shutdown_ = true;
  for (Mailbox& b : boxes_) {
    // Taking the lock orders the flag before any waiter's predicate check.
    std::lock_guard lock(b.mu);
    b.ready.notify_all();
  }
}

}  // namespace bdfl::federation
