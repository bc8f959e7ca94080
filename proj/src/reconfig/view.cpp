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

#include "brbpay/reconfig/view.hpp"

#include <algorithm>
#include <set>

namespace brbpay {

InstallRecord make_install_record(const GroupView& current, ReplicaId joiner, const Signature& join_sig) {
  InstallRecord r;
  r.new_view = current.id + 1;
  r.members = current.members;
  r.members.push_back(joiner);
  std::sort(r.members.begin(), r.members.end());
  r.f = current.f;
  r.joiner = joiner;
  r.join_sig = join_sig;
  return r;
}

bool valid_successor(const GroupView& current, const InstallRecord& r, const KeyRegistry& keys) {
  if (r.new_view != current.id + 1 || current.contains(r.joiner)) return false;
  const InstallRecord expected = make_install_record(current, r.joiner, r.join_sig);
  if (r.members != expected.members || r.f != current.f) return false;
  if (static_cast<int>(r.members.size()) < 3 * r.f + 1) return false;
  return keys.verify(Principal::of(r.joiner), join_signing_bytes(r.joiner, current.id), r.join_sig);
}

GroupView successor(const InstallRecord& r) { return {r.new_view, r.members, r.f}; }

LogMap adopt_logs(const std::vector<std::shared_ptr<const LogMap>>& snapshots, int vouchers) {
  std::set<ClientId> clients;
  for (const auto& s : snapshots) {
    if (!s) continue;
    for (const auto& [c, _] : *s) clients.insert(c);
  }
  LogMap out;
  for (auto c : clients) {
    std::vector<const std::vector<Payment>*> candidates;
    for (const auto& s : snapshots) {
      if (!s) continue;
      auto it = s->find(c);
      if (it != s->end()) candidates.push_back(&it->second);
    }
    std::vector<Payment> adopted;
    for (std::size_t k = 0;; ++k) {
      // only snapshots that agreed on every earlier entry may vouch for entry k
      std::map<Digest, std::vector<const std::vector<Payment>*>> groups;
      for (const auto* log : candidates) {
        if (log->size() > k && (*log)[k].id == PaymentId{c, k}) groups[payment_digest((*log)[k])].push_back(log);
      }
      const std::vector<const std::vector<Payment>*>* best = nullptr;
      for (const auto& [_, g] : groups) {
        if (static_cast<int>(g.size()) >= vouchers && (!best || g.size() > best->size())) best = &g;
      }
      if (!best) break;
      adopted.push_back((*best->front())[k]);
      candidates = *best;
    }
    if (!adopted.empty()) out[c] = std::move(adopted);
  }
  return out;
}

bool ResumeGate::add(ReplicaId from, const std::map<ClientId, SeqNo>& delivered) {
  if (!view_.contains(from) || !acks_.insert(from)) return false;
  reports_.push_back(delivered);
  return true;
}

void ResumeGate::resume() {
  if (!ready()) {
    throw ReconfigError("resume of view " + std::to_string(view_.id) + " with " + std::to_string(acks_.size()) +
                        " acks, quorum is " + std::to_string(view_.quorum()));
  }
  resumed_ = true;
}

SeqNo ResumeGate::min_delivered(ClientId c) const {
  SeqNo best = ~SeqNo{0};
  for (const auto& r : reports_) {
    auto it = r.find(c);
    best = std::min(best, it == r.end() ? SeqNo{0} : it->second);
  }
  return reports_.empty() ? 0 : best;
}

}  // namespace brbpay
