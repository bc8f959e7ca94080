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

#include "brbpay/brb/echo_brb.hpp"

namespace brbpay {

EchoBrb::EchoBrb(BrbTransport& transport, Admit admit, Deliver deliver, Options options)
    : transport_(transport), admit_(std::move(admit)), deliver_(std::move(deliver)), options_(options) {}

BatchKey EchoBrb::broadcast(std::shared_ptr<const PaymentBatch> batch) {
  const BatchKey key = next_key();
  send_prepare(key, std::move(batch), view_.members);
  return key;
}

void EchoBrb::send_prepare(const BatchKey& key, std::shared_ptr<const PaymentBatch> batch,
                           const std::vector<ReplicaId>& targets) {
  PrepareMsg m{key, batch, batch_digest(*batch), std::nullopt};
  transport_.multicast(targets, m);
}

EchoBrb::Instance* EchoBrb::instance(const BatchKey& key, ReplicaId from) {
  if (key.view != view_.id || !view_.contains(from) || !view_.contains(key.broadcaster)) return nullptr;
  return &instances_[key];
}

void EchoBrb::blame(ReplicaId who, const BatchKey& key, std::string what) {
  evidence_.push_back({who, key, std::move(what)});
}

void EchoBrb::on_prepare(ReplicaId from, const PrepareMsg& m) {
  if (from != m.key.broadcaster) {
    blame(from, m.key, "prepare relayed for another broadcaster");
    return;
  }
  Instance* inst = instance(m.key, from);
  if (!inst || !m.payload) return;
  const Digest d = batch_digest(*m.payload);
  if (d != m.digest) {
    blame(from, m.key, "prepare digest mismatch");
    return;
  }
  PerDigest& pd = inst->digests[d];
  if (!pd.payload) {
    pd.payload = m.payload;
    for (auto r : pd.waiting) transport_.send(r, PayloadResponseMsg{m.key, pd.payload, d});
    pd.waiting.clear();
  }
  if (inst->delivered || pd.echoed) return;

  if (inst->echoed_any && !options_.ignore_conflicts) {
    blame(from, m.key, "conflicting prepare");
    return;
  }
  const Admission a = admit_(from, m.key, *m.payload);
  if (a != Admission::kAccept && !options_.ignore_conflicts) {
    blame(from, m.key, a == Admission::kConflict ? "payment conflicts with earlier payload" : "invalid batch");
    maybe_deliver(m.key, *inst, d);
    return;
  }
  pd.echoed = true;
  inst->echoed_any = true;
  transport_.multicast(view_.members, EchoMsg{m.key, d});
  maybe_deliver(m.key, *inst, d);
}

void EchoBrb::on_echo(ReplicaId from, const EchoMsg& m) {
  Instance* inst = instance(m.key, from);
  if (!inst) return;
  PerDigest& pd = inst->digests[m.digest];
  if (!pd.echoes.insert(from)) return;
  maybe_ready(m.key, *inst, m.digest);
}

void EchoBrb::on_ready(ReplicaId from, const ReadyMsg& m) {
  Instance* inst = instance(m.key, from);
  if (!inst) return;
  PerDigest& pd = inst->digests[m.digest];
  if (!pd.readies.insert(from)) return;
  maybe_ready(m.key, *inst, m.digest);
  maybe_deliver(m.key, *inst, m.digest);
}

void EchoBrb::maybe_ready(const BatchKey& key, Instance& inst, const Digest& d) {
  PerDigest& pd = inst.digests[d];
  if (pd.readied || (inst.readied_any && !options_.ignore_conflicts)) return;
  if (pd.echoes.size() < view_.quorum() && pd.readies.size() < certificate_threshold(view_.f)) return;
  pd.readied = true;
  inst.readied_any = true;
  transport_.multicast(view_.members, ReadyMsg{key, d});
}

void EchoBrb::maybe_deliver(const BatchKey& key, Instance& inst, const Digest& d) {
  if (inst.delivered) return;
  PerDigest& pd = inst.digests[d];
  if (pd.readies.size() < 2 * view_.f + 1) return;
  if (!pd.payload) {
    if (!pd.pull_scheduled) {
      pd.pull_scheduled = true;
      transport_.schedule(options_.pull_delay, [this, key, d] { pull(key, d); });
    }
    return;
  }
  inst.delivered = true;
  deliver_(key, pd.payload);
}

void EchoBrb::pull(const BatchKey& key, const Digest& d) {
  auto it = instances_.find(key);
  if (it == instances_.end() || it->second.delivered || key.view != view_.id) return;
  PerDigest& pd = it->second.digests[d];
  if (pd.payload) return;
  // correct echoers hold the payload; ask them, or everyone if too few are known
  std::vector<ReplicaId> targets;
  if (pd.echoes.size() >= certificate_threshold(view_.f)) {
    pd.echoes.for_each([&](ReplicaId r) {
      if (r != transport_.self()) targets.push_back(r);
    });
  } else {
    for (auto r : view_.members) {
      if (r != transport_.self()) targets.push_back(r);
    }
  }
  transport_.multicast(targets, PayloadRequestMsg{key, d});
}

void EchoBrb::on_payload_request(ReplicaId from, const PayloadRequestMsg& m) {
  Instance* inst = instance(m.key, from);
  if (!inst) return;
  PerDigest& pd = inst->digests[m.digest];
  if (pd.payload) {
    transport_.send(from, PayloadResponseMsg{m.key, pd.payload, m.digest});
  } else {
    pd.waiting.push_back(from);
  }
}

void EchoBrb::on_payload_response(ReplicaId from, const PayloadResponseMsg& m) {
  Instance* inst = instance(m.key, from);
  if (!inst || !m.payload) return;
  auto it = inst->digests.find(m.digest);
  if (it == inst->digests.end() || it->second.payload) return;
  if (batch_digest(*m.payload) != m.digest) {
    blame(from, m.key, "payload response digest mismatch");
    return;
  }
  it->second.payload = m.payload;
  maybe_deliver(m.key, *inst, m.digest);
}

bool EchoBrb::delivered(const BatchKey& key) const {
  auto it = instances_.find(key);
  return it != instances_.end() && it->second.delivered;
}

std::size_t EchoBrb::undelivered() const {
  std::size_t n = 0;
  for (const auto& [_, inst] : instances_) n += inst.delivered ? 0 : 1;
  return n;
}

}  // namespace brbpay
