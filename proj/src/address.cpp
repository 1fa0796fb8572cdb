#include "slg/address.hpp"

#include <stdexcept>

namespace slg {

std::string NodeAddress::str() const {
  if (path.empty()) return "eps";
  std::string s;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

NodeAddress NodeAddress::parse(const std::string& text) {
  if (text == "eps" || text.empty()) return NodeAddress{};
  NodeAddress a;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t dot = text.find('.', pos);
    std::string part = text.substr(pos, dot == std::string::npos ? dot : dot - pos);
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad address component '" + part + "' in '" + text + "'");
    }
    if (used != part.size() || v < 1)
      throw std::invalid_argument("bad address component '" + part + "' in '" + text + "'");
    a.path.push_back(v);
    if (dot == std::string::npos) break;
    pos = dot + 1;
    if (pos == text.size())
      throw std::invalid_argument("trailing '.' in address '" + text + "'");
  }
  return a;
}

}  // namespace slg
