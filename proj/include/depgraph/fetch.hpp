#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace depgraph {

// HTTP failure surfaced from the registry endpoint.
struct FetchError : std::runtime_error {
  FetchError(const std::string& msg, int status)
      : std::runtime_error(msg), http_status(status) {}
  int http_status;
};

struct FetchOptions {
  std::string endpoint;  // http://host[:port][/path]
  std::optional<std::int64_t> since;  // resume after this sequence number
  int page_limit = 1000;
};

struct FetchResult {
  std::size_t docs = 0;      // registry documents consumed
  std::size_t releases = 0;  // flattened per-release lines written
  std::int64_t last_seq = 0;
  bool complete = false;  // false after a network failure; checkpoint kept
};

// Streams a CouchDB-style `_changes?since=<seq>&include_docs=true` feed,
// flattening each package document into one registry record line per
// release. The sequence checkpoint is persisted to "<out_path>.checkpoint"
// after every page; pass it back as `since` to resume without duplicates.
// A fresh fetch truncates out_path, a resume appends. HTTP status >= 400
// throws FetchError; a dropped connection returns complete=false with the
// partial file retained.
FetchResult fetch_registry(const FetchOptions& options,
                           const std::string& out_path);

}  // namespace depgraph
