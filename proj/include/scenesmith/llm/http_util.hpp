#pragma once

#include <string>
#include <utility>
#include <vector>

namespace scenesmith {

struct HttpResponse {
  int status = 0;
  std::string body;
};

struct UrlParts {
  std::string scheme_host_port;  // e.g. "https://api.example.com:443"
  std::string path;              // always starts with '/'
};

/// Throws InvalidArgument for anything but http:// or https:// URLs.
UrlParts split_url(const std::string& url);

/// POST with Content-Type application/json. Connection failures throw TransportError;
/// HTTP error statuses are returned to the caller.
HttpResponse http_post_json(const std::string& url, const std::string& body,
                            const std::vector<std::pair<std::string, std::string>>& headers,
                            int timeout_seconds);

}  // namespace scenesmith
