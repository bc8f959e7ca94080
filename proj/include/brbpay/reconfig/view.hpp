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

// Join-only membership change: installed views form a sequence, each one
// adding a single replica. The install record is agreed on inside the old
// view; the joiner rebuilds its state from old-view log snapshots.

#ifndef BRBPAY_RECONFIG_VIEW_HPP_
#define BRBPAY_RECONFIG_VIEW_HPP_

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "brbpay/brb/group.hpp"
#include "brbpay/brb/replica_set.hpp"

namespace brbpay {

class ReconfigError : public Error {
 public:
  using Error::Error;
};

/// An installed view and the certificate that installed it (null for the
/// initial view).
struct View {
  GroupView group;
  std::shared_ptr<const InstallRecord> record;
  std::shared_ptr<const CommitCertificate> proof;
};

/// Install record adding `joiner` to `current`; the fault bound is kept.
InstallRecord make_install_record(const GroupView& current, ReplicaId joiner, const Signature& join_sig);

/// Checks that `r` is the one admissible successor of `current` for its
/// joiner: next id, members extended by exactly the joiner, 3f+1 structure
/// kept, joiner's signature valid.
bool valid_successor(const GroupView& current, const InstallRecord& r, const KeyRegistry& keys);

GroupView successor(const InstallRecord& r);

/// Per client, the longest log prefix on which at least `vouchers`
/// snapshots agree entry by entry.
LogMap adopt_logs(const std::vector<std::shared_ptr<const LogMap>>& snapshots, int vouchers);

/// Counts RESUME_ACKs of a new view. Resuming is allowed only once a
/// quorum of the new view has reported.
class ResumeGate {
 public:
  explicit ResumeGate(GroupView view) : view_(std::move(view)) {}

  const GroupView& view() const { return view_; }
  /// False for non-members and repeats.
  bool add(ReplicaId from, const std::map<ClientId, SeqNo>& delivered);
  bool ready() const { return acks_.size() >= view_.quorum(); }
  /// Throws ReconfigError without a quorum.
  void resume();
  bool resumed() const { return resumed_; }
  /// Smallest delivered prefix of `c` over the acks received so far.
  SeqNo min_delivered(ClientId c) const;
  int acks() const { return acks_.size(); }

 private:
  GroupView view_;
  ReplicaSet acks_;
  std::vector<std::map<ClientId, SeqNo>> reports_;
  bool resumed_ = false;
};

}  // namespace brbpay

#endif  // BRBPAY_RECONFIG_VIEW_HPP_
