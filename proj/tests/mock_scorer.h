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

// In-process scorer endpoint speaking the /score and /health protocol, with
// a scripted response per request. Shared by the client conformance tests
// and the CLI tests.

#ifndef CCC_TESTS_MOCK_SCORER_H_
#define CCC_TESTS_MOCK_SCORER_H_

#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ccc/triple_store.h"

namespace ccc::testing {

struct MockReply {
  int status = 200;
  std::string body;
};

class MockScorer {
 public:
  using Script = std::function<MockReply(const std::vector<Triple>&, int call)>;

  explicit MockScorer(Script script, std::string health = "ok")
      : script_(std::move(script)), health_(std::move(health)) {
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      const int call = calls_++;
      nlohmann::json j = nlohmann::json::parse(req.body, nullptr, false);
      std::vector<Triple> triples;
      if (j.is_discarded() || !j.contains("triples") || !j["triples"].is_array()) {
        malformed_requests_++;
        res.status = 400;
        return;
      }
      for (const auto& t : j["triples"]) {
        if (!t.contains("head") || !t.contains("relation") || !t.contains("tail")) {
          malformed_requests_++;
          res.status = 400;
          return;
        }
        triples.push_back({t["head"], t["relation"], t["tail"]});
      }
      MockReply reply = script_(triples, call);
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
    server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(nlohmann::json{{"status", health_}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockScorer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int calls() const { return calls_; }
  int malformed_requests() const { return malformed_requests_; }

  static MockReply Scores(const std::vector<double>& scores) {
    return {200, nlohmann::json{{"scores", scores}}.dump()};
  }

 private:
  Script script_;
  std::string health_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> calls_{0};
  std::atomic<int> malformed_requests_{0};
};

// A port with nothing listening on it.
inline int ClosedPort() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  socklen_t len = sizeof(addr);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), len);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace ccc::testing

#endif  // CCC_TESTS_MOCK_SCORER_H_
