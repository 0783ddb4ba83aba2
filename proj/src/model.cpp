#include "depgraph/model.hpp"

#include <cctype>

namespace depgraph {

bool is_valid_package_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  std::size_t slash = name.find('/');
  if (slash == std::string_view::npos)
    return name[0] != '@';  // a bare "@scope" without a name is invalid
  // Scoped: "@scope/name" with exactly one '/'.
  if (name[0] != '@' || slash < 2 || slash + 1 >= name.size()) return false;
  return name.find('/', slash + 1) == std::string_view::npos;
}

}  // namespace depgraph
