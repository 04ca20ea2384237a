// Copyright 2026 The Aqua Authors
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

#include <httplib.h>

#include "aqua/net/transport.hpp"

namespace aqua::net {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // /path?query
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("invalid URL '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override {
    const auto [origin, path] = split_url(request.url);
    httplib::Client client(origin);
    const auto secs = request.timeout.count() / 1000;
    const auto usecs = (request.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }

    httplib::Result result;
    switch (request.method) {
      case Method::get: result = client.Get(path, headers); break;
      case Method::post: result = client.Post(path, headers, request.body, content_type); break;
      case Method::del: result = client.Delete(path, headers); break;
    }
    if (!result) {
      throw TransportError(request.url + ": " + httplib::to_string(result.error()));
    }
    return {result->status, result->body};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() { return std::make_unique<HttplibTransport>(); }

}  // namespace aqua::net
