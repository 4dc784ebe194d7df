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

#include "ehrqa/remote.h"

#include <algorithm>
#include <thread>

#include "httplib.h"

#include "ehrqa/errors.h"

namespace ehrqa {

Endpoint parse_endpoint(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0 || url.size() == scheme.size()) {
    throw ConfigError("endpoint '" + url + "' must look like http://host[:port][/path]");
  }
  const auto slash = url.find('/', scheme.size());
  Endpoint ep;
  ep.scheme_host_port = url.substr(0, slash);
  if (slash != std::string::npos && slash + 1 < url.size()) ep.path = url.substr(slash);
  return ep;
}

nlohmann::json make_request(std::span<const ReaderInput> batch) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : batch) inputs.push_back(to_json(in));
  return {{"inputs", std::move(inputs)}};
}

std::vector<ReaderOutput> parse_response(const nlohmann::json& body,
                                         std::span<const ReaderInput> batch) {
  if (!body.is_object() || !body.contains("outputs") || !body["outputs"].is_array()) {
    throw ProtocolError("outputs", "missing or not an array");
  }
  const auto& outputs = body["outputs"];
  if (outputs.size() != batch.size()) {
    throw ProtocolError("outputs", "expected " + std::to_string(batch.size()) +
                                       " outputs, got " +
                                       std::to_string(outputs.size()));
  }
  std::vector<ReaderOutput> result;
  result.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::string prefix = "outputs[" + std::to_string(i) + "]";
    ReaderOutput out = reader_output_from_json(outputs[i], prefix);
    if (out.qid != batch[i].qid) {
      throw ProtocolError(prefix + ".qid", "expected '" + batch[i].qid +
                                               "', got '" + out.qid + "'");
    }
    validate_output(out, prefix, utf8::length(batch[i].context));
    result.push_back(std::move(out));
  }
  return result;
}

std::vector<ReaderOutput> remote_read(std::span<const ReaderInput> batch,
                                      const Endpoint& endpoint,
                                      std::chrono::milliseconds timeout,
                                      int max_attempts) {
  if (batch.empty()) return {};
  const std::string body = make_request(batch).dump();
  httplib::Client client(endpoint.scheme_host_port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  std::string last_error = "no attempt made";
  int attempt = 0;
  while (attempt < std::max(1, max_attempts)) {
    ++attempt;
    auto res = client.Post(endpoint.path, body, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
    } else if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status);
    } else if (res->status != 200) {
      throw ProtocolError("status", "HTTP " + std::to_string(res->status));
    } else {
      nlohmann::json parsed;
      try {
        parsed = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError("body", e.what());
      }
      return parse_response(parsed, batch);
    }
    if (attempt < max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    }
  }
  throw TransportError(attempt, "reading from " + endpoint.scheme_host_port +
                                    endpoint.path + ": " + last_error);
}

}  // namespace ehrqa
