// Copyright 2026 The sparqlbench Authors.
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

#include <chrono>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace sparqlbench::util {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // always starts with '/'

  static Url parse(const std::string& url);
  std::string origin() const;
};

struct HttpRequest {
  std::string method = "POST";
  std::string url;
  std::string body;
  std::string content_type;
  std::map<std::string, std::string> headers;
  std::chrono::milliseconds timeout{60000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Connection-level failure: no HTTP status was received.
class HttpTransportFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws HttpTransportFailure when no response arrives.
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

// cpp-httplib backed transport; https requires OpenSSL support.
std::shared_ptr<HttpTransport> make_http_transport();

std::string url_encode(const std::string& s);

}  // namespace sparqlbench::util
