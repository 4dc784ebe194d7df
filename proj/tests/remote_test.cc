/* Copyright 2026 The ehrqa Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <atomic>
#include <fstream>
#include <functional>
#include <thread>

#include "doctest.h"
#include "httplib.h"

#include "ehrqa/errors.h"
#include "ehrqa/remote.h"
#include "ehrqa/verification.h"

namespace ehrqa {
namespace {

nlohmann::json golden() {
  std::ifstream in(std::string(EHRQA_TEST_DATA) + "/golden_exchange.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

std::vector<ReaderInput> golden_batch() {
  const auto g = golden();
  std::vector<ReaderInput> batch;
  for (const auto& j : g["request"]["inputs"]) batch.push_back(reader_input_from_json(j));
  return batch;
}

// Serves POST /read with a caller-supplied handler on an ephemeral port.
class FixtureServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit FixtureServer(Handler h) {
    server_.Post("/read", [this, h](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      h(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  Endpoint endpoint() const {
    return parse_endpoint("http://127.0.0.1:" + std::to_string(port_) + "/read");
  }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

void reply(httplib::Response& res, const nlohmann::json& body) {
  res.set_content(body.dump(), "application/json");
}

constexpr std::chrono::milliseconds kTimeout{2000};

TEST_CASE("endpoint parsing") {
  auto ep = parse_endpoint("http://localhost:8080/v1/read");
  CHECK(ep.scheme_host_port == "http://localhost:8080");
  CHECK(ep.path == "/v1/read");
  CHECK(parse_endpoint("http://host:1").path == "/read");
  CHECK_THROWS_AS(parse_endpoint("https://host"), ConfigError);
  CHECK_THROWS_AS(parse_endpoint("host:80"), ConfigError);
}

TEST_CASE("golden exchange") {
  const auto g = golden();
  FixtureServer server([&](const httplib::Request& req, httplib::Response& res) {
    if (nlohmann::json::parse(req.body) != g["request"]) {
      res.status = 400;
      return;
    }
    reply(res, g["response"]);
  });
  auto batch = golden_batch();
  auto out = remote_read(batch, server.endpoint(), kTimeout);
  REQUIRE(out.size() == 2);

  ReaderOutput a;
  a.qid = "a";
  a.no_answer_prob = 0.0;
  a.start_probs = {0, 0, 0, 0, 1, 0, 0};
  a.end_probs = {0, 0, 0, 0, 0, 1, 0};
  a.offsets = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
  CHECK(out[0] == a);
  CHECK(out[1].qid == "b");
  CHECK(out[1].no_answer_prob == 1.0);

  auto span = decode_span(out[0], {});
  REQUIRE(span.has_value());
  CHECK(utf8::slice(batch[0].context, *span) == "积液");
  CHECK_FALSE(decode_span(out[1], {}).has_value());
  CHECK(make_request(batch) == g["request"]);
}

TEST_CASE("empty batch makes no call") {
  FixtureServer server([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  CHECK(remote_read({}, server.endpoint(), kTimeout).empty());
  CHECK(server.hits() == 0);
}

std::string failing_field(const nlohmann::json& body) {
  FixtureServer server([&](const httplib::Request&, httplib::Response& res) { reply(res, body); });
  auto batch = golden_batch();
  try {
    remote_read(batch, server.endpoint(), kTimeout);
  } catch (const ProtocolError& e) {
    return e.field();
  }
  return "";
}

TEST_CASE("malformed responses are rejected with the field named") {
  auto base = golden()["response"];

  auto half = base;
  half["outputs"][0]["start_probs"] = {0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0};
  CHECK(failing_field(half) == "outputs[0].start_probs");

  auto wrong_qid = base;
  wrong_qid["outputs"][1]["qid"] = "zzz";
  CHECK(failing_field(wrong_qid) == "outputs[1].qid");

  auto short_list = base;
  short_list["outputs"].erase(1);
  CHECK(failing_field(short_list) == "outputs");

  auto past_end = base;
  past_end["outputs"][1]["offsets"] = {{0, 1}, {1, 3}};
  CHECK(failing_field(past_end) == "outputs[1].offsets[1]");

  auto missing = base;
  missing["outputs"][0].erase("end_probs");
  CHECK(failing_field(missing) == "outputs[0].end_probs");

  CHECK(failing_field(nlohmann::json::object()) == "outputs");
}

TEST_CASE("server errors are retried") {
  std::atomic<int> calls{0};
  const auto g = golden();
  FixtureServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    reply(res, g["response"]);
  });
  auto batch = golden_batch();
  auto out = remote_read(batch, server.endpoint(), kTimeout, 3);
  CHECK(out.size() == 2);
  CHECK(server.hits() == 3);
}

TEST_CASE("persistent server errors end in a transport error") {
  FixtureServer server([](const httplib::Request&, httplib::Response& res) { res.status = 502; });
  auto batch = golden_batch();
  try {
    remote_read(batch, server.endpoint(), kTimeout, 2);
    FAIL("expected TransportError");
  } catch (const TransportError& e) {
    CHECK(e.attempts() == 2);
  }
  CHECK(server.hits() == 2);
}

TEST_CASE("unreachable endpoint") {
  // Grab a free port, then close the server so nothing listens there.
  Endpoint ep;
  {
    FixtureServer server([](const httplib::Request&, httplib::Response&) {});
    ep = server.endpoint();
  }
  auto batch = golden_batch();
  CHECK_THROWS_AS(remote_read(batch, ep, std::chrono::milliseconds(300), 2), TransportError);
}

TEST_CASE("client errors are not retried") {
  FixtureServer server([](const httplib::Request&, httplib::Response& res) { res.status = 422; });
  auto batch = golden_batch();
  CHECK_THROWS_AS(remote_read(batch, server.endpoint(), kTimeout, 3), ProtocolError);
  CHECK(server.hits() == 1);
}

TEST_CASE("backend wraps the client") {
  const auto g = golden();
  FixtureServer server(
      [&](const httplib::Request&, httplib::Response& res) { reply(res, g["response"]); });
  RemoteBackend backend(server.endpoint(), kTimeout);
  CHECK_FALSE(backend.needs_gold());
  auto batch = golden_batch();
  CHECK(backend.read(batch).size() == 2);
}

}  // namespace
}  // namespace ehrqa
