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

#include "brbpay/sim/trace.hpp"

#include <fmt/format.h>

#include <istream>
#include <json.hpp>
#include <ostream>

namespace brbpay {

const char* to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::kSend: return "send";
    case TraceEvent::kDeliver: return "deliver";
    case TraceEvent::kDrop: return "drop";
    case TraceEvent::kSettle: return "settle";
    case TraceEvent::kCrash: return "crash";
    case TraceEvent::kDelay: return "delay";
    case TraceEvent::kInstall: return "install";
    case TraceEvent::kResume: return "resume";
  }
  return "?";
}

std::string to_string(Principal p) {
  return (p.kind == Principal::Kind::kReplica ? "r" : "c") + std::to_string(p.id);
}

const char* to_string(TraceMode m) {
  switch (m) {
    case TraceMode::kNone: return "none";
    case TraceMode::kDigest: return "digest";
    case TraceMode::kFull: return "full";
  }
  return "?";
}

TraceMode parse_trace_mode(const std::string& s) {
  if (s == "none") return TraceMode::kNone;
  if (s == "digest") return TraceMode::kDigest;
  if (s == "full") return TraceMode::kFull;
  throw ConfigError("unknown trace mode '" + s + "'");
}

struct Trace::Hasher {
  DigestBuilder builder;
  ByteWriter scratch{256};
};

Trace::Trace(TraceMode mode) : mode_(mode) {
  if (mode_ != TraceMode::kNone) hasher_ = std::make_unique<Hasher>();
}

Trace::~Trace() = default;
Trace::Trace(Trace&&) noexcept = default;
Trace& Trace::operator=(Trace&&) noexcept = default;

namespace {

void pack(ByteWriter& w, const TraceRecord& r) {
  w.u64(static_cast<std::uint64_t>(r.t));
  w.u8(static_cast<std::uint8_t>(r.ev));
  w.u8(r.kind ? static_cast<std::uint8_t>(*r.kind) : 0xFF);
  w.u8(static_cast<std::uint8_t>(r.src.kind));
  w.u32(r.src.id);
  w.u8(r.dst ? static_cast<std::uint8_t>(r.dst->kind) : 0xFF);
  w.u32(r.dst ? r.dst->id : 0);
  w.u32(static_cast<std::uint32_t>(r.pids.size()));
  for (const auto& id : r.pids) {
    w.u32(id.spender.value);
    w.u64(id.seq);
  }
  w.u64(r.view ? *r.view : ~std::uint64_t{0});
  if (r.batch) {
    w.u8(1);
    w.u64(r.batch->view);
    w.u32(r.batch->broadcaster.value);
    w.u64(r.batch->seq);
  } else {
    w.u8(0);
  }
}

}  // namespace

void Trace::record(TraceRecord r) {
  if (mode_ == TraceMode::kNone) return;
  if (!digest_.empty()) throw Error("trace already closed");
  ++count_;
  ByteWriter w(64 + r.pids.size() * 12);
  pack(w, r);
  hasher_->builder.update(w.bytes());
  if (mode_ == TraceMode::kFull) records_.push_back(std::move(r));
}

const std::string& Trace::digest() {
  if (digest_.empty()) digest_ = hasher_ ? to_hex(hasher_->builder.finish()) : std::string("none");
  return digest_;
}

std::string Trace::json_line(const TraceRecord& r) {
  std::string s = fmt::format(R"({{"t":{},"ev":"{}")", r.t, to_string(r.ev));
  if (r.kind) s += fmt::format(R"(,"kind":"{}")", to_string(*r.kind));
  s += fmt::format(R"(,"src":"{}")", to_string(r.src));
  if (r.dst) s += fmt::format(R"(,"dst":"{}")", to_string(*r.dst));
  if (!r.pids.empty()) {
    s += R"(,"pid":[)";
    for (std::size_t i = 0; i < r.pids.size(); ++i) {
      s += fmt::format("{}[{},{}]", i ? "," : "", r.pids[i].spender.value, r.pids[i].seq);
    }
    s += "]";
  }
  if (r.view) s += fmt::format(R"(,"view":{})", *r.view);
  if (r.batch) s += fmt::format(R"(,"batch":[{},{},{}])", r.batch->view, r.batch->broadcaster.value, r.batch->seq);
  s += "}";
  return s;
}

void Trace::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) out << json_line(r) << '\n';
}

namespace {

Principal parse_principal(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'r' && s[0] != 'c')) throw DecodeError("bad participant '" + s + "'");
  try {
    const auto id = static_cast<std::uint32_t>(std::stoul(s.substr(1)));
    return {s[0] == 'r' ? Principal::Kind::kReplica : Principal::Kind::kClient, id};
  } catch (const std::exception&) {
    throw DecodeError("bad participant '" + s + "'");
  }
}

template <class E, std::size_t N>
E parse_enum(const std::string& s, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (s == to_string(static_cast<E>(i))) return static_cast<E>(i);
  }
  throw DecodeError(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

std::vector<TraceRecord> read_jsonl(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TraceRecord r;
      r.t = j.at("t").get<SimTime>();
      r.ev = parse_enum<TraceEvent, 8>(j.at("ev").get<std::string>(), "event");
      if (j.contains("kind")) r.kind = parse_enum<MsgKind, kMsgKindCount>(j["kind"].get<std::string>(), "kind");
      r.src = parse_principal(j.at("src").get<std::string>());
      if (j.contains("dst")) r.dst = parse_principal(j["dst"].get<std::string>());
      if (j.contains("pid")) {
        for (const auto& p : j["pid"]) r.pids.push_back({ClientId{p.at(0).get<std::uint32_t>()}, p.at(1).get<SeqNo>()});
      }
      if (j.contains("view")) r.view = j["view"].get<std::uint64_t>();
      if (j.contains("batch")) {
        const auto& b = j["batch"];
        r.batch = BatchKey{b.at(0).get<std::uint64_t>(), ReplicaId{b.at(1).get<std::uint32_t>()},
                           b.at(2).get<std::uint64_t>()};
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DecodeError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace brbpay
