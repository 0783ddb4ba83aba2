#include "depgraph/fetch.hpp"

#include <fstream>

#include <httplib.h>
#include <json.hpp>

namespace depgraph {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string host;
  int port = 80;
  std::string path;  // no trailing slash
};

std::optional<Endpoint> parse_endpoint(const std::string& url) {
  constexpr std::string_view scheme = "http://";
  if (url.rfind(scheme, 0) != 0) return std::nullopt;
  std::string rest = url.substr(scheme.size());
  Endpoint ep;
  std::size_t slash = rest.find('/');
  std::string host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
  if (slash != std::string::npos) {
    ep.path = rest.substr(slash);
    while (!ep.path.empty() && ep.path.back() == '/') ep.path.pop_back();
  }
  std::size_t colon = host_port.find(':');
  if (colon == std::string::npos) {
    ep.host = host_port;
  } else {
    ep.host = host_port.substr(0, colon);
    try {
      ep.port = std::stoi(host_port.substr(colon + 1));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return ep.host.empty() ? std::nullopt : std::make_optional(ep);
}

json maintainer_names(const json& list) {
  json out = json::array();
  if (!list.is_array()) return out;
  for (const auto& entry : list) {
    if (entry.is_string())
      out.push_back(entry);
    else if (entry.is_object() && entry.contains("name") &&
             entry["name"].is_string())
      out.push_back(entry["name"]);
  }
  return out;
}

// One registry record line per release of the package document.
std::size_t flatten_doc(const json& doc, std::ofstream& out) {
  if (!doc.is_object()) return 0;
  std::string name;
  if (doc.contains("name") && doc["name"].is_string())
    name = doc["name"].get<std::string>();
  else if (doc.contains("_id") && doc["_id"].is_string())
    name = doc["_id"].get<std::string>();
  if (name.empty() || !doc.contains("versions") || !doc["versions"].is_object())
    return 0;

  const json& times = doc.contains("time") && doc["time"].is_object()
                          ? doc["time"]
                          : json::object();
  json doc_maintainers = doc.contains("maintainers")
                             ? maintainer_names(doc["maintainers"])
                             : json::array();

  std::size_t written = 0;
  for (const auto& [version, vdoc] : doc["versions"].items()) {
    json record;
    record["name"] = name;
    record["version"] = version;
    if (times.contains(version) && times[version].is_string())
      record["time"] = times[version];
    if (vdoc.is_object()) {
      if (vdoc.contains("dependencies") && vdoc["dependencies"].is_object())
        record["dependencies"] = vdoc["dependencies"];
      if (vdoc.contains("devDependencies") && vdoc["devDependencies"].is_object())
        record["devDependencies"] = vdoc["devDependencies"];
      if (vdoc.contains("maintainers"))
        record["maintainers"] = maintainer_names(vdoc["maintainers"]);
    }
    if (!record.contains("maintainers")) record["maintainers"] = doc_maintainers;
    out << record.dump() << "\n";
    ++written;
  }
  return written;
}

void write_checkpoint(const std::string& out_path, std::int64_t seq) {
  std::ofstream cp(out_path + ".checkpoint", std::ios::trunc);
  cp << seq << "\n";
}

}  // namespace

FetchResult fetch_registry(const FetchOptions& options,
                           const std::string& out_path) {
  auto ep = parse_endpoint(options.endpoint);
  if (!ep) throw FetchError("unsupported endpoint url: " + options.endpoint, 0);

  httplib::Client client(ep->host, ep->port);
  client.set_read_timeout(30, 0);

  FetchResult result;
  result.last_seq = options.since.value_or(0);
  std::ofstream out(out_path, options.since ? std::ios::app : std::ios::trunc);
  if (!out) throw FetchError("cannot open output file: " + out_path, 0);

  while (true) {
    std::string url = ep->path + "/_changes?since=" +
                      std::to_string(result.last_seq) +
                      "&include_docs=true&limit=" +
                      std::to_string(options.page_limit);
    auto res = client.Get(url);
    if (!res) {
      out.flush();
      return result;  // network failure; partial file + checkpoint survive
    }
    if (res->status >= 400)
      throw FetchError("registry returned HTTP " + std::to_string(res->status),
                       res->status);

    json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("results") ||
        !body["results"].is_array())
      throw FetchError("invalid _changes response body", res->status);

    const json& results = body["results"];
    if (results.empty()) break;
    for (const auto& row : results) {
      if (row.contains("doc")) result.releases += flatten_doc(row["doc"], out);
      ++result.docs;
      if (row.contains("seq") && row["seq"].is_number())
        result.last_seq = row["seq"].get<std::int64_t>();
    }
    if (body.contains("last_seq") && body["last_seq"].is_number())
      result.last_seq = body["last_seq"].get<std::int64_t>();
    out.flush();
    write_checkpoint(out_path, result.last_seq);
    if (results.size() < static_cast<std::size_t>(options.page_limit)) break;
  }

  result.complete = true;
  write_checkpoint(out_path, result.last_seq);
  return result;
}

}  // namespace depgraph
