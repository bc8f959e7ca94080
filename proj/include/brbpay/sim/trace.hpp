// Copyright 2026 The brbpay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BRBPAY_SIM_TRACE_HPP_
#define BRBPAY_SIM_TRACE_HPP_

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brbpay/brb/messages.hpp"

namespace brbpay {

enum class TraceEvent : std::uint8_t { kSend, kDeliver, kDrop, kSettle, kCrash, kDelay, kInstall, kResume };
const char* to_string(TraceEvent e);

std::string to_string(Principal p);

struct TraceRecord {
  SimTime t = 0;
  TraceEvent ev = TraceEvent::kSend;
  std::optional<MsgKind> kind;
  Principal src;
  std::optional<Principal> dst;
  std::vector<PaymentId> pids;
  std::optional<std::uint64_t> view;
  std::optional<BatchKey> batch;
};

enum class TraceMode {
  kNone,    // nothing recorded
  kDigest,  // running SHA-256 over the binary image of every record
  kFull,    // digest plus every record kept in memory
};

const char* to_string(TraceMode m);
TraceMode parse_trace_mode(const std::string& s);

class Trace {
 public:
  explicit Trace(TraceMode mode);
  ~Trace();
  Trace(Trace&&) noexcept;
  Trace& operator=(Trace&&) noexcept;

  TraceMode mode() const { return mode_; }
  bool enabled() const { return mode_ != TraceMode::kNone; }

  void record(TraceRecord r);
  std::uint64_t count() const { return count_; }
  const std::vector<TraceRecord>& records() const { return records_; }

  /// Hex SHA-256 over everything recorded; closes the trace.
  const std::string& digest();

  static std::string json_line(const TraceRecord& r);
  void write_jsonl(std::ostream& out) const;

 private:
  struct Hasher;
  TraceMode mode_;
  std::uint64_t count_ = 0;
  std::vector<TraceRecord> records_;
  std::unique_ptr<Hasher> hasher_;
  std::string digest_;
};

/// Parses lines written by write_jsonl. Throws DecodeError on malformed
/// input.
std::vector<TraceRecord> read_jsonl(std::istream& in);

}  // namespace brbpay

#endif  // BRBPAY_SIM_TRACE_HPP_
