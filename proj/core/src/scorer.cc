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

#include "ccc/scorer.h"

#include <cmath>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ccc/errors.h"
#include "ccc/parallel.h"

namespace ccc {

// httplib clients are not safe for concurrent requests, so every call
// builds its own from the shared settings.
struct HttpScorer::Client {
  explicit Client(const ScorerEndpoint& endpoint) : http(endpoint.base_url) {
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        endpoint.timeout - secs);
    http.set_connection_timeout(secs.count(), usecs.count());
    http.set_read_timeout(secs.count(), usecs.count());
    http.set_write_timeout(secs.count(), usecs.count());
  }
  httplib::Client http;
};

namespace {

void CheckScores(const std::vector<double>& scores, std::size_t expected) {
  if (scores.size() != expected) {
    throw ProtocolError("scorer returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(expected) + " triples");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ProtocolError("scorer returned out-of-range score " +
                          std::to_string(s));
    }
  }
}

}  // namespace

std::string EncodeScoreRequest(std::span<const Triple> triples) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Triple& t : triples) {
    arr.push_back({{"head", t.head}, {"relation", t.relation}, {"tail", t.tail}});
  }
  return nlohmann::json{{"triples", std::move(arr)}}.dump();
}

std::vector<double> DecodeScoreResponse(std::string_view body,
                                        std::size_t expected) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("scores") ||
      !j["scores"].is_array()) {
    throw ProtocolError("scorer response lacks a \"scores\" array");
  }
  std::vector<double> scores;
  scores.reserve(j["scores"].size());
  for (const auto& v : j["scores"]) {
    if (!v.is_number()) throw ProtocolError("non-numeric score in response");
    scores.push_back(v.get<double>());
  }
  CheckScores(scores, expected);
  return scores;
}

HttpScorer::HttpScorer(ScorerEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (endpoint_.max_attempts < 1) throw InvalidArgument("max attempts must be >= 1");
  if (!Client(endpoint_).http.is_valid()) {
    throw InvalidArgument("bad scorer address: " + endpoint_.base_url);
  }
}

HttpScorer::~HttpScorer() = default;

std::vector<double> HttpScorer::Score(std::span<const Triple> triples) {
  const std::string body = EncodeScoreRequest(triples);
  Client client(endpoint_);
  std::string last_error;
  for (int attempt = 1; attempt <= endpoint_.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(endpoint_.backoff * (attempt - 1));
    auto res = client.http.Post("/score", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("scorer rejected request with HTTP " +
                          std::to_string(res->status) + ": " + res->body);
    }
    return DecodeScoreResponse(res->body, triples.size());
  }
  throw TransportError("scorer at " + endpoint_.base_url + " failed after " +
                       std::to_string(endpoint_.max_attempts) +
                       " attempts: " + last_error);
}

std::string HttpScorer::Health() {
  Client client(endpoint_);
  auto res = client.http.Get("/health");
  if (!res) {
    throw TransportError("scorer at " + endpoint_.base_url +
                         " unreachable: " + httplib::to_string(res.error()));
  }
  nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("status") ||
      !j["status"].is_string()) {
    throw ProtocolError("health response lacks a \"status\" string");
  }
  return j["status"].get<std::string>();
}

std::vector<double> ScoreBatch(Scorer& scorer, std::span<const Triple> triples,
                               unsigned max_in_flight) {
  const std::size_t batch = std::max<std::size_t>(1, scorer.batch_size());
  const std::size_t batches = (triples.size() + batch - 1) / batch;
  std::vector<std::vector<double>> parts(batches);
  ParallelFor(batches, std::max(1u, max_in_flight), [&](std::size_t b) {
    auto part = triples.subspan(b * batch, std::min(batch, triples.size() - b * batch));
    parts[b] = scorer.Score(part);
    CheckScores(parts[b], part.size());
  });
  std::vector<double> out;
  out.reserve(triples.size());
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace ccc
