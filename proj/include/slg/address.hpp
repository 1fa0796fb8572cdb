#ifndef SLG_ADDRESS_HPP
#define SLG_ADDRESS_HPP

#include <compare>
#include <string>
#include <vector>

namespace slg {

// Gorn address of a tree node: the path of 1-based child indices from the
// root. The empty path addresses the root itself. Vector comparison gives
// the prefix-then-sibling total order used everywhere addresses are sorted.
struct NodeAddress {
  std::vector<int> path;

  NodeAddress() = default;
  explicit NodeAddress(std::vector<int> p) : path(std::move(p)) {}

  bool is_root() const { return path.empty(); }
  NodeAddress child(int i) const {
    NodeAddress a = *this;
    a.path.push_back(i);
    return a;
  }

  auto operator<=>(const NodeAddress&) const = default;

  // "eps" for the root, dotted 1-based indices otherwise, e.g. "2.2".
  std::string str() const;
  static NodeAddress parse(const std::string& text);
};

}  // namespace slg

#endif  // SLG_ADDRESS_HPP
