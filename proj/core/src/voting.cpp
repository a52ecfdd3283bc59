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

#include "arca/voting.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <stdexcept>

#include "arca/dataset.hpp"

namespace arca {

void to_json(json& j, const VotingWeights& v) {
  j = json{{"agent", v.agent}, {"w_c", v.w_c}, {"w_e", v.w_e}};
}

void from_json(const json& j, VotingWeights& v) {
  j.at("agent").get_to(v.agent);
  j.at("w_c").get_to(v.w_c);
  j.at("w_e").get_to(v.w_e);
}

WeightTable initial_weights() {
  WeightTable t;
  for (AgentRole r : kAllRoles) t[r] = VotingWeights{r, 1.0, 1.0};
  return t;
}

void to_json(json& j, const Proposal& v) {
  j = json{{"answerer", v.answerer},
           {"question", v.question},
           {"answer", v.answer},
           {"round", v.round}};
  if (v.challenger) j["challenger"] = *v.challenger;
}

void from_json(const json& j, Proposal& v) {
  j.at("answerer").get_to(v.answerer);
  j.at("question").get_to(v.question);
  j.at("answer").get_to(v.answer);
  j.at("round").get_to(v.round);
  v.challenger.reset();
  if (j.contains("challenger")) v.challenger = j.at("challenger").get<AgentRole>();
}

namespace {

// Role-keyed maps serialize with role-name keys.
template <typename V>
json role_map_to_json(const std::map<AgentRole, V>& m) {
  json j = json::object();
  for (const auto& [role, v] : m) j[role_name(role)] = v;
  return j;
}

template <typename V>
std::map<AgentRole, V> role_map_from_json(const json& j) {
  std::map<AgentRole, V> m;
  for (const auto& [key, v] : j.items()) {
    json rk = key;
    V val;
    v.get_to(val);
    m[rk.get<AgentRole>()] = std::move(val);
  }
  return m;
}

}  // namespace

void to_json(json& j, const VoteRound& v) {
  j = json{{"proposal", v.proposal},
           {"ballots", role_map_to_json(v.ballots)},
           {"weights_snapshot", role_map_to_json(v.weights_snapshot)},
           {"s", v.s},
           {"p", v.p},
           {"passed", v.passed}};
}

void from_json(const json& j, VoteRound& v) {
  j.at("proposal").get_to(v.proposal);
  v.ballots = role_map_from_json<Ballot>(j.at("ballots"));
  v.weights_snapshot = role_map_from_json<double>(j.at("weights_snapshot"));
  j.at("s").get_to(v.s);
  j.at("p").get_to(v.p);
  j.at("passed").get_to(v.passed);
}

void to_json(json& j, const LedgerBlock& v) {
  j = json{{"index", v.index},
           {"prev_hash", v.prev_hash},
           {"payload", v.payload},
           {"hash", v.hash}};
}

void from_json(const json& j, LedgerBlock& v) {
  j.at("index").get_to(v.index);
  j.at("prev_hash").get_to(v.prev_hash);
  v.payload = j.at("payload");
  j.at("hash").get_to(v.hash);
}

std::string block_hash(std::int64_t index, const std::string& prev_hash,
                       const json& payload) {
  // Canonical form: sorted-key compact serialization (nlohmann objects are
  // key-ordered already).
  std::string material =
      std::to_string(index) + "|" + prev_hash + "|" + payload.dump();
  return sha256_hex(material);
}

namespace {
const std::string kGenesisPrev(64, '0');
}

void Ledger::append(json payload) {
  LedgerBlock b;
  b.index = static_cast<std::int64_t>(blocks_.size());
  b.prev_hash = blocks_.empty() ? kGenesisPrev : blocks_.back().hash;
  b.payload = std::move(payload);
  b.hash = block_hash(b.index, b.prev_hash, b.payload);
  blocks_.push_back(std::move(b));
}

void Ledger::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ledger " + file.string());
  for (const auto& b : blocks_) {
    json j = b;
    out << j.dump() << "\n";
  }
}

Ledger Ledger::load(const std::filesystem::path& file) {
  Ledger l;
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open ledger " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    l.blocks_.push_back(json::parse(line).get<LedgerBlock>());
  }
  return l;
}

Ledger Ledger::from_blocks(std::vector<LedgerBlock> blocks) {
  Ledger l;
  l.blocks_ = std::move(blocks);
  return l;
}

LedgerVerification verify_ledger(const std::vector<LedgerBlock>& chain) {
  std::string prev = kGenesisPrev;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const LedgerBlock& b = chain[i];
    if (b.index != static_cast<std::int64_t>(i) || b.prev_hash != prev ||
        b.hash != block_hash(b.index, b.prev_hash, b.payload)) {
      return {false, static_cast<std::int64_t>(i)};
    }
    prev = b.hash;
  }
  return {true, std::nullopt};
}

std::optional<AgentRole> maybe_challenge(const Proposal& proposal,
                                         const Validator& validators) {
  for (AgentRole role : kAllRoles) {
    if (validators(role, proposal).flag) return role;
  }
  return std::nullopt;
}

TallyResult tally(const std::map<AgentRole, Ballot>& ballots,
                  const std::map<AgentRole, double>& weights, double alpha,
                  double beta) {
  double total = 0, support = 0, participation = 0;
  for (AgentRole role : kAllRoles) {
    auto wit = weights.find(role);
    double w = wit == weights.end() ? 0.0 : wit->second;
    total += w;
    auto bit = ballots.find(role);
    Ballot b = bit == ballots.end() ? Ballot::Abstain : bit->second;
    if (b == Ballot::For) support += w;
    if (b != Ballot::Abstain) participation += w;
  }
  // The weight floor makes a zero denominator impossible.
  assert(total > 0);
  TallyResult r;
  r.s = support / total;
  r.p = participation / total;
  r.passed = r.s >= alpha && r.p >= beta;
  return r;
}

double DecayRng::uniform01() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return (z >> 11) * 0x1.0p-53;
}

void apply_weight_updates(const VoteRound& round, bool passed, WeightTable& weights,
                          DecayRng& rng, const VotingConfig& cfg) {
  for (AgentRole role : kAllRoles) {
    VotingWeights& w = weights[role];
    auto bit = round.ballots.find(role);
    Ballot ballot = bit == round.ballots.end() ? Ballot::Abstain : bit->second;
    bool is_challenger =
        round.proposal.challenger && *round.proposal.challenger == role;
    bool participated = ballot != Ballot::Abstain || is_challenger;

    double delta = rng.uniform01() * cfg.delta_max;
    double dwc = participated ? cfg.dwc : 0.0;
    w.w_c = std::clamp(std::min(w.w_c * (1.0 - delta) + dwc, cfg.cap), cfg.floor,
                       cfg.cap);

    double dwe = 0.0;
    if (ballot == Ballot::For) dwe = passed ? cfg.dwe : -cfg.dwe;
    if (ballot == Ballot::Against) dwe = passed ? -cfg.dwe : cfg.dwe;
    w.w_e = std::clamp(std::min(w.w_e + dwe, cfg.cap), cfg.floor, cfg.cap);
  }
}

VoteCycleResult VotingChain::run_vote_cycle(Proposal proposal,
                                            const ReAnswerFn& re_answer) {
  if (proposal.round != 0)
    throw std::invalid_argument("vote cycle must start at round 0");

  VoteCycleResult result;
  while (true) {
    auto challenger = maybe_challenge(proposal, validator_);
    if (!challenger) {
      record_acceptance(proposal);
      result.accepted = proposal.answer;
      return result;
    }
    proposal.challenger = challenger;

    VoteRound round;
    round.proposal = proposal;
    for (AgentRole role : kAllRoles) {
      ValidatorVerdict v = validator_(role, proposal);
      Ballot b = Ballot::Abstain;
      if (v.flag) {
        b = Ballot::Against;
      } else if (v.can_judge) {
        b = Ballot::For;
      }
      round.ballots[role] = b;
      round.weights_snapshot[role] = weights_[role].effective();
    }
    TallyResult t = tally(round.ballots, round.weights_snapshot, cfg_.alpha, cfg_.beta);
    round.s = t.s;
    round.p = t.p;
    round.passed = t.passed;
    result.rounds += 1;

    apply_weight_updates(round, round.passed, weights_, rng_, cfg_);
    json payload;
    payload["type"] = "vote_round";
    payload["round"] = round;
    ledger_.append(payload);

    if (!round.passed) {
      record_acceptance(proposal);
      result.accepted = proposal.answer;
      return result;
    }
    auto replacement = re_answer(proposal);
    if (!replacement) {
      result.degraded = true;
      record_acceptance(proposal);
      result.accepted = proposal.answer;
      return result;
    }
    proposal.answer = *replacement;
    proposal.round += 1;
    proposal.challenger.reset();
    if (proposal.round >= cfg_.max_reanswers) {
      // Re-answer cap: accept the latest answer, dissent on record.
      result.dissent = true;
      record_acceptance(proposal);
      result.accepted = proposal.answer;
      return result;
    }
  }
}

void VotingChain::record_acceptance(const Proposal& proposal) {
  json payload;
  payload["type"] = "acceptance";
  payload["proposal"] = proposal;
  json a = proposal.answer;
  payload["answer_hash"] = sha256_hex(a.dump());
  ledger_.append(payload);
}

}  // namespace arca
