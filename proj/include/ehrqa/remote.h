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

#ifndef EHRQA_REMOTE_H_
#define EHRQA_REMOTE_H_

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "ehrqa/reader.h"

namespace ehrqa {

struct Endpoint {
  std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
  std::string path = "/read";
};

// Accepts "http://host[:port][/path]". Throws ConfigError otherwise.
Endpoint parse_endpoint(const std::string& url);

// Request body for a batch: {"inputs": [{qid, question, context}, ...]}.
nlohmann::json make_request(std::span<const ReaderInput> batch);

// Checks a response body against its batch: same length, same qids in the
// same order, every output valid. Throws ProtocolError naming the field.
std::vector<ReaderOutput> parse_response(const nlohmann::json& body,
                                         std::span<const ReaderInput> batch);

// POSTs one batch. Empty batches return immediately. Transport failures are
// retried up to `max_attempts` times and then throw TransportError.
std::vector<ReaderOutput> remote_read(std::span<const ReaderInput> batch,
                                      const Endpoint& endpoint,
                                      std::chrono::milliseconds timeout,
                                      int max_attempts = 3);

class RemoteBackend : public ReaderBackend {
 public:
  RemoteBackend(Endpoint endpoint, std::chrono::milliseconds timeout,
                int max_attempts = 3)
      : endpoint_(std::move(endpoint)),
        timeout_(timeout),
        max_attempts_(max_attempts) {}

  std::vector<ReaderOutput> read(std::span<const ReaderInput> batch) override {
    return remote_read(batch, endpoint_, timeout_, max_attempts_);
  }

 private:
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
  int max_attempts_;
};

}  // namespace ehrqa

#endif  // EHRQA_REMOTE_H_
