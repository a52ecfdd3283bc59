// Copyright 2026 The Arca Authors
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

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arca/roles.hpp"
#include "arca/runtime.hpp"

namespace arca {

enum class Ballot { For, Abstain, Against };

NLOHMANN_JSON_SERIALIZE_ENUM(Ballot, {{Ballot::For, "For"},
                                      {Ballot::Abstain, "Abstain"},
                                      {Ballot::Against, "Against"}})

struct VotingConfig {
  double alpha = 0.5;          // support threshold
  double beta = 0.5;           // participation threshold
  double delta_max = 0.03;     // random decay upper bound
  double dwc = 0.1;            // participation credit on w_c
  double dwe = 0.01;           // alignment step on w_e
  double cap = 1.5;            // w_{c_max} = w_{e_max}
  double floor = 0.1;
  int max_reanswers = 2;
  std::uint64_t seed = 0;
};

struct VotingWeights {
  AgentRole agent = AgentRole::AlertReceiver;
  double w_c = 1.0;
  double w_e = 1.0;

  double effective() const { return w_c * w_e; }
};

void to_json(json& j, const VotingWeights& v);
void from_json(const json& j, VotingWeights& v);

using WeightTable = std::map<AgentRole, VotingWeights>;

WeightTable initial_weights();

struct Proposal {
  AgentRole answerer = AgentRole::DataDetective;  // X
  Question question;                              // Q
  Answer answer;                                  // A
  std::optional<AgentRole> challenger;            // Y
  int round = 0;                                  // re-answer count
};

void to_json(json& j, const Proposal& v);
void from_json(const json& j, Proposal& v);

struct VoteRound {
  Proposal proposal;
  std::map<AgentRole, Ballot> ballots;
  std::map<AgentRole, double> weights_snapshot;
  double s = 0;
  double p = 0;
  bool passed = false;
};

void to_json(json& j, const VoteRound& v);
void from_json(const json& j, VoteRound& v);

struct LedgerBlock {
  std::int64_t index = 0;
  std::string prev_hash;  // hex sha256; genesis links to all zeros
  json payload;
  std::string hash;
};

void to_json(json& j, const LedgerBlock& v);
void from_json(const json& j, LedgerBlock& v);

class Ledger {
 public:
  const std::vector<LedgerBlock>& blocks() const { return blocks_; }
  void append(json payload);
  void save(const std::filesystem::path& file) const;
  static Ledger load(const std::filesystem::path& file);
  static Ledger from_blocks(std::vector<LedgerBlock> blocks);

 private:
  std::vector<LedgerBlock> blocks_;
};

std::string block_hash(std::int64_t index, const std::string& prev_hash,
                       const json& payload);

struct LedgerVerification {
  bool ok = true;
  std::optional<std::int64_t> first_bad_index;
};

LedgerVerification verify_ledger(const std::vector<LedgerBlock>& chain);

// Per-role answer inspection; returns a flag reason or nullopt, plus
// whether the role can judge the topic at all (cannot-judge roles abstain).
struct ValidatorVerdict {
  std::optional<std::string> flag;
  bool can_judge = false;
};

using Validator = std::function<ValidatorVerdict(AgentRole role, const Proposal&)>;

// First flagging role in fixed role order initiates a vote.
std::optional<AgentRole> maybe_challenge(const Proposal& proposal,
                                         const Validator& validators);

struct TallyResult {
  double s = 0;
  double p = 0;
  bool passed = false;
};

// Weight-normalized For fraction and non-Abstain fraction over all
// chain agents; absentees count as Abstain.
TallyResult tally(const std::map<AgentRole, Ballot>& ballots,
                  const std::map<AgentRole, double>& weights, double alpha,
                  double beta);

// Deterministic RNG stream for weight decay.
class DecayRng {
 public:
  explicit DecayRng(std::uint64_t seed) : state_(seed) {}
  double uniform01();

 private:
  std::uint64_t state_;
};

// Contribution and accuracy updates per chain agent, clamped into
// [floor, cap].
void apply_weight_updates(const VoteRound& round, bool passed, WeightTable& weights,
                          DecayRng& rng, const VotingConfig& cfg);

struct VoteCycleResult {
  Answer accepted;
  int rounds = 0;
  bool dissent = false;   // accepted at the re-answer cap
  bool degraded = false;  // re-answer backend failure
};

using ReAnswerFn = std::function<std::optional<Answer>(const Proposal&)>;

class VotingChain {
 public:
  VotingChain(VotingConfig cfg, Validator validator)
      : cfg_(cfg), validator_(std::move(validator)), weights_(initial_weights()),
        rng_(cfg.seed) {}

  // Full lifecycle for one proposal: challenge, ballots from every
  // chain agent, tally, weight updates, bounded re-answer loop, ledger.
  VoteCycleResult run_vote_cycle(Proposal proposal, const ReAnswerFn& re_answer);

  // Record an answer without any vote (voting disabled / unchallenged).
  void record_acceptance(const Proposal& proposal);

  const WeightTable& weights() const { return weights_; }
  const Ledger& ledger() const { return ledger_; }
  Ledger& mutable_ledger() { return ledger_; }
  const VotingConfig& config() const { return cfg_; }

 private:
  VotingConfig cfg_;
  Validator validator_;
  WeightTable weights_;
  DecayRng rng_;
  Ledger ledger_;
};

}  // namespace arca
