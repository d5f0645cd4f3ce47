// Copyright 2026 The subvote Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subvote/protocol.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "nlohmann/json.hpp"
#include "subvote/errors.h"

namespace subvote {

SignMatrix::SignMatrix(int n, size_t d)
    : n_(n), d_(d), values_(static_cast<size_t>(n) * d, 1) {
  if (n < 0) throw InvalidArgument("negative user count");
}

SignMatrix::SignMatrix(int n, size_t d, std::vector<int8_t> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n < 0 || values_.size() != static_cast<size_t>(n) * d) {
    throw InvalidArgument("sign matrix size mismatch");
  }
  for (int8_t v : values_) {
    if (v != 1 && v != -1) throw InvalidArgument("sign matrix entries must be +1 or -1");
  }
}

SignMatrix SignMatrix::FromRows(const std::vector<std::vector<int>>& rows) {
  const size_t d = rows.empty() ? 0 : rows.front().size();
  std::vector<int8_t> values;
  values.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw InvalidArgument("ragged sign matrix rows");
    for (int v : r) values.push_back(static_cast<int8_t>(v));
  }
  return {static_cast<int>(rows.size()), d, std::move(values)};
}

SignMatrix SignMatrix::ParseCsv(std::istream& is) {
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stoi(cell));
      } catch (const std::exception&) {
        throw InvalidArgument("bad CSV cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return FromRows(rows);
}

void SignMatrix::set(int user, size_t coord, int v) {
  if (v != 1 && v != -1) throw InvalidArgument("sign matrix entries must be +1 or -1");
  values_[Index(user, coord)] = static_cast<int8_t>(v);
}

SignMatrix SignMatrix::Rows(int first, int count) const {
  if (first < 0 || count < 0 || first + count > n_) throw InvalidArgument("row range out of bounds");
  auto begin = values_.begin() + static_cast<std::ptrdiff_t>(static_cast<size_t>(first) * d_);
  auto end = begin + static_cast<std::ptrdiff_t>(static_cast<size_t>(count) * d_);
  return {count, d_, std::vector<int8_t>(begin, end)};
}

SignMatrix SignMatrix::Select(std::span<const int> users) const {
  std::vector<int8_t> values;
  values.reserve(users.size() * d_);
  for (int u : users) {
    if (u < 0 || u >= n_) throw InvalidArgument("user index out of bounds");
    auto r = row(u);
    values.insert(values.end(), r.begin(), r.end());
  }
  return {static_cast<int>(users.size()), d_, std::move(values)};
}

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  gate_mults += o.gate_mults;
  finalize_mults += o.finalize_mults;
  masked_elements += o.masked_elements;
  dealt_elements += o.dealt_elements;
  return *this;
}

UserSession::UserSession(int user, std::span<const int8_t> input, const MvPolynomial& poly,
                         const PowerSchedule& schedule, const BeaverTripleSet& triples,
                         uint64_t round)
    : user_(user),
      round_(round),
      poly_(&poly),
      schedule_(&schedule),
      triples_(&triples),
      d_(input.size()) {
  if (user < 0 || user >= poly.n()) throw InvalidArgument("user index out of range");
  if (triples.n() != poly.n() || triples.modulus() != poly.modulus()) {
    throw InvalidArgument("triples were dealt for a different group or field");
  }
  if (triples.gate_count() != schedule.mult_count || triples.d() != d_) {
    throw InvalidArgument("triples are not sized for this schedule and dimension");
  }
  const PrimeModulus& mod = poly.modulus();
  powers_.resize(static_cast<size_t>(std::max(poly.degree(), 1)) + 1);
  auto& x = powers_[1];
  x.reserve(d_);
  for (int8_t v : input) x.push_back(mod.FromInt(v));
}

std::span<const uint64_t> UserSession::PowerShare(int exponent) const {
  if (exponent < 0 || static_cast<size_t>(exponent) >= powers_.size()) return {};
  return powers_[static_cast<size_t>(exponent)];
}

MaskedOpeningUpload UserSession::MaskedUpload(int gate) const {
  if (gate < 0 || gate >= schedule_->mult_count) {
    throw ProtocolOrderError("gate " + std::to_string(gate) + " is not in the schedule");
  }
  const PowerGate& g = schedule_->gates[static_cast<size_t>(gate)];
  auto left = PowerShare(g.left);
  auto right = PowerShare(g.right);
  if (left.size() != d_ || right.size() != d_) {
    throw ProtocolOrderError("user " + std::to_string(user_) + " has no share of an operand of x^" +
                             std::to_string(g.target) + " yet");
  }
  const PrimeModulus& mod = poly_->modulus();
  auto a = triples_->a(gate, user_);
  auto b = triples_->b(gate, user_);
  MaskedOpeningUpload up{round_, g.layer, gate, user_, std::vector<uint64_t>(d_),
                         std::vector<uint64_t>(d_)};
  for (size_t j = 0; j < d_; ++j) {
    up.first[j] = mod.Sub(left[j], a[j]);
    up.second[j] = mod.Sub(right[j], b[j]);
  }
  return up;
}

void UserSession::ApplyBroadcast(const OpeningBroadcast& bc) {
  if (bc.gate != next_gate_ || next_gate_ >= schedule_->mult_count) {
    throw ProtocolOrderError("user " + std::to_string(user_) + " expected gate " +
                             std::to_string(next_gate_) + ", got " + std::to_string(bc.gate));
  }
  if (bc.delta.size() != d_ || bc.epsilon.size() != d_) {
    throw ProtocolOrderError("broadcast dimension mismatch");
  }
  const PrimeModulus& mod = poly_->modulus();
  const PowerGate& g = schedule_->gates[static_cast<size_t>(bc.gate)];
  auto a = triples_->a(bc.gate, user_);
  auto b = triples_->b(bc.gate, user_);
  auto c = triples_->c(bc.gate, user_);
  std::vector<uint64_t> out(d_);
  for (size_t j = 0; j < d_; ++j) {
    uint64_t v = mod.Add(c[j], mod.Mul(bc.delta[j], b[j]));
    v = mod.Add(v, mod.Mul(bc.epsilon[j], a[j]));
    if (designated()) v = mod.Add(v, mod.Mul(bc.delta[j], bc.epsilon[j]));
    out[j] = v;
  }
  ops_.gate_mults += (designated() ? 3 : 2) * d_;
  powers_[static_cast<size_t>(g.target)] = std::move(out);
  ++next_gate_;
}

EncryptedShareUpload UserSession::FinalizeShare() {
  if (next_gate_ != schedule_->mult_count) {
    throw ProtocolOrderError("user " + std::to_string(user_) + " finalized with " +
                             std::to_string(schedule_->mult_count - next_gate_) +
                             " gates outstanding");
  }
  const PrimeModulus& mod = poly_->modulus();
  const auto& coeffs = poly_->coeffs();
  EncryptedShareUpload up{round_, user_, std::vector<uint64_t>(d_, 0)};
  for (size_t k = 1; k < powers_.size(); ++k) {
    if (coeffs[k] == 0) continue;
    const auto& pw = powers_[k];
    for (size_t j = 0; j < d_; ++j) up.share[j] = mod.Add(up.share[j], mod.Mul(coeffs[k], pw[j]));
    ops_.finalize_mults += d_;
  }
  if (designated() && coeffs[0] != 0) {
    for (auto& s : up.share) s = mod.Add(s, coeffs[0]);
  }
  return up;
}

namespace {

template <typename Upload>
void CheckOnePerUser(std::span<const Upload> uploads, int n, const char* what) {
  if (uploads.size() != static_cast<size_t>(n)) {
    throw IncompleteGateError(std::string(what) + ": expected " + std::to_string(n) +
                              " uploads, got " + std::to_string(uploads.size()));
  }
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (const auto& u : uploads) {
    if (u.user < 0 || u.user >= n || seen[static_cast<size_t>(u.user)]) {
      throw IncompleteGateError(std::string(what) + ": missing or duplicate upload from user " +
                                std::to_string(u.user));
    }
    seen[static_cast<size_t>(u.user)] = true;
  }
}

}  // namespace

OpeningBroadcast ServerOpen(std::span<const MaskedOpeningUpload> uploads, int n,
                            const PrimeModulus& modulus) {
  CheckOnePerUser(uploads, n, "masked opening");
  const auto& first = uploads.front();
  const size_t d = first.first.size();
  OpeningBroadcast bc{first.round, first.layer, first.gate, std::vector<uint64_t>(d, 0),
                      std::vector<uint64_t>(d, 0)};
  for (const auto& up : uploads) {
    if (up.gate != first.gate || up.first.size() != d || up.second.size() != d) {
      throw IncompleteGateError("masked opening: uploads for different gates or dimensions");
    }
    for (size_t j = 0; j < d; ++j) {
      bc.delta[j] = modulus.Add(bc.delta[j], modulus.Reduce(up.first[j]));
      bc.epsilon[j] = modulus.Add(bc.epsilon[j], modulus.Reduce(up.second[j]));
    }
  }
  return bc;
}

std::vector<int> ServerAggregate(std::span<const EncryptedShareUpload> uploads,
                                 const MvPolynomial& poly) {
  CheckOnePerUser(uploads, poly.n(), "final aggregation");
  const PrimeModulus& mod = poly.modulus();
  const size_t d = uploads.front().share.size();
  std::vector<uint64_t> sum(d, 0);
  for (const auto& up : uploads) {
    if (up.share.size() != d) throw IncompleteGateError("final aggregation: dimension mismatch");
    for (size_t j = 0; j < d; ++j) sum[j] = mod.Add(sum[j], mod.Reduce(up.share[j]));
  }
  std::vector<int> votes(d);
  for (size_t j = 0; j < d; ++j) {
    const int64_t v = mod.Centered(sum[j]);
    if (v < -1 || v > 1) {
      throw ProtocolCorruptionError("coordinate " + std::to_string(j) + " decoded to " +
                                    std::to_string(v) + ", not a vote");
    }
    votes[j] = static_cast<int>(v);
  }
  return votes;
}

std::string_view ToString(TranscriptRecord::Type type) {
  using T = TranscriptRecord::Type;
  switch (type) {
    case T::kConfig:
      return "config";
    case T::kMaskedUpload:
      return "masked_upload";
    case T::kOpening:
      return "opening";
    case T::kShareUpload:
      return "share_upload";
    case T::kVote:
      return "vote";
    case T::kGroupVote:
      return "group_vote";
    case T::kGlobalVote:
      return "global_vote";
  }
  return "?";
}

void ProtocolTranscript::WriteJsonl(std::ostream& os) const {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["type"] = ToString(r.type);
    j["round"] = r.round;
    if (r.subgroup >= 0) j["subgroup"] = r.subgroup;
    if (r.config) {
      j["n"] = r.config->n;
      j["d"] = r.config->d;
      j["p"] = r.config->p;
      j["policy"] = r.config->policy;
      j["gates"] = r.config->gates;
      j["seed"] = r.config->seed;
    } else {
      j["layer"] = r.layer;
      j["gate"] = r.gate;
      if (r.user >= 0) j["user"] = r.user;
      j["values"] = r.values;
    }
    os << j.dump() << '\n';
  }
}

std::string ProtocolTranscript::ToJsonl() const {
  std::ostringstream os;
  WriteJsonl(os);
  return os.str();
}

namespace {

std::vector<int64_t> Concat(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b = {}) {
  std::vector<int64_t> out;
  out.reserve(a.size() + b.size());
  for (uint64_t v : a) out.push_back(static_cast<int64_t>(v));
  for (uint64_t v : b) out.push_back(static_cast<int64_t>(v));
  return out;
}

}  // namespace

RoundResult RunSubgroupRound(const SignMatrix& inputs, const MvPolynomial& poly,
                             const PowerSchedule& schedule, const BeaverTripleSet& triples,
                             const RoundOptions& options, int subgroup) {
  using T = TranscriptRecord::Type;
  const int n = poly.n();
  if (inputs.n() != n) {
    throw InvalidArgument("input has " + std::to_string(inputs.n()) +
                          " users, polynomial expects " + std::to_string(n));
  }
  const size_t d = inputs.d();
  RoundResult result;
  auto& records = result.transcript.records;
  const bool rec = options.record_transcript;
  const uint64_t round = options.round;
  if (rec) {
    TranscriptRecord cfg{T::kConfig, round, subgroup};
    cfg.config = ConfigEcho{n, d, poly.modulus().value(), std::string(ToString(poly.policy())),
                            schedule.mult_count, options.seed};
    records.push_back(std::move(cfg));
  }

  std::vector<UserSession> users;
  users.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) users.emplace_back(i, inputs.row(i), poly, schedule, triples, round);

  for (size_t layer = 0; layer < schedule.layers.size(); ++layer) {
    const auto& gates = schedule.layers[layer];
    std::vector<OpeningBroadcast> broadcasts;
    for (int g : gates) {
      std::vector<MaskedOpeningUpload> uploads;
      uploads.reserve(static_cast<size_t>(n));
      for (auto& u : users) {
        uploads.push_back(u.MaskedUpload(g));
        result.ops.masked_elements += 2 * d;
        if (rec) {
          const auto& up = uploads.back();
          records.push_back({T::kMaskedUpload, round, subgroup, up.layer, g, up.user,
                             Concat(up.first, up.second)});
        }
      }
      broadcasts.push_back(ServerOpen(uploads, n, poly.modulus()));
    }
    for (const auto& bc : broadcasts) {
      if (rec) {
        records.push_back({T::kOpening, round, subgroup, bc.layer, bc.gate, -1,
                           Concat(bc.delta, bc.epsilon)});
      }
      for (auto& u : users) u.ApplyBroadcast(bc);
    }
  }

  std::vector<EncryptedShareUpload> shares;
  shares.reserve(static_cast<size_t>(n));
  for (auto& u : users) {
    shares.push_back(u.FinalizeShare());
    if (rec) {
      records.push_back({T::kShareUpload, round, subgroup, -1, -1, u.user(),
                         Concat(shares.back().share)});
    }
  }
  if (n > 0) result.votes = ServerAggregate(shares, poly);
  for (const auto& u : users) result.ops += u.ops();
  if (rec) {
    std::vector<int64_t> v(result.votes.begin(), result.votes.end());
    records.push_back({T::kVote, round, subgroup, -1, -1, -1, std::move(v)});
  }
  return result;
}

RoundResult RunFlatRound(const SignMatrix& inputs, const MvPolynomial& poly,
                         const BeaverTripleSet& triples, const RoundOptions& options) {
  const PowerSchedule schedule = BuildPowerSchedule(poly);
  return RunSubgroupRound(inputs, poly, schedule, triples, options, -1);
}

std::vector<int> PlainMajority(const SignMatrix& inputs, TiePolicy policy) {
  std::vector<int> out(inputs.d());
  for (size_t j = 0; j < inputs.d(); ++j) {
    int64_t sum = 0;
    for (int i = 0; i < inputs.n(); ++i) sum += inputs.at(i, j);
    out[j] = SignOf(sum, policy);
  }
  return out;
}

}  // namespace subvote
