// Copyright 2026 The CCC Toolkit Authors.
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

// Clients for the triple scorer. The wire protocol:
//
//   POST /score   {"triples":[{"head":..,"relation":..,"tail":..},...]}
//              -> {"scores":[s_1,...]}    one score in [0,1] per triple
//   GET  /health  -> {"status":"ok"}      ("warming" while loading)

#ifndef CCC_SCORER_H_
#define CCC_SCORER_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/triple_store.h"

namespace ccc {

class Scorer {
 public:
  virtual ~Scorer() = default;
  // One score per triple, in order. Implementations may assume the input
  // fits in one batch; use ScoreBatch for arbitrary lengths. Must be safe to
  // call from several threads at once.
  virtual std::vector<double> Score(std::span<const Triple> triples) = 0;
  virtual std::size_t batch_size() const { return 1024; }
  virtual std::string name() const = 0;
};

// Scores every triple with a constant.
class StubScorer : public Scorer {
 public:
  explicit StubScorer(double value = 0.5) : value_(value) {}
  std::vector<double> Score(std::span<const Triple> triples) override {
    return std::vector<double>(triples.size(), value_);
  }
  std::string name() const override { return "stub"; }

 private:
  double value_;
};

struct ScorerEndpoint {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  std::chrono::milliseconds timeout{30000};
  std::size_t batch_size = 64;
  int max_attempts = 3;
  std::chrono::milliseconds backoff{200};
};

class HttpScorer : public Scorer {
 public:
  explicit HttpScorer(ScorerEndpoint endpoint);
  ~HttpScorer() override;

  std::vector<double> Score(std::span<const Triple> triples) override;
  std::size_t batch_size() const override { return endpoint_.batch_size; }
  std::string name() const override { return endpoint_.base_url; }

  // Value of "status" from /health. Throws TransportError if unreachable.
  std::string Health();

 private:
  struct Client;
  ScorerEndpoint endpoint_;
};

std::string EncodeScoreRequest(std::span<const Triple> triples);
// Throws ProtocolError on a malformed body, a length mismatch, or a score
// outside [0, 1].
std::vector<double> DecodeScoreResponse(std::string_view body,
                                        std::size_t expected);

// Splits into batches of scorer.batch_size() with up to `max_in_flight`
// outstanding at once; preserves order and checks each batch's length and
// range.
std::vector<double> ScoreBatch(Scorer& scorer, std::span<const Triple> triples,
                               unsigned max_in_flight = 1);

}  // namespace ccc

#endif  // CCC_SCORER_H_
