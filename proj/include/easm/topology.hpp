#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "easm/matrix.hpp"

namespace easm {

// Undirected link between two node indices, normalized so that a < b.
struct Link {
  std::size_t a = 0;
  std::size_t b = 0;

  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

// BFS hop counts for every ordered node pair. Throws ValidationError listing
// the connected components when the graph is disconnected.
HopMatrix all_pairs_hops(std::size_t node_count, const std::vector<Link>& links);

// Immutable undirected graph with an all-pairs hop matrix.
//
// Node rows are ordered lexicographically by id, independent of the order the
// nodes were supplied in, so that every derived matrix is reproducible.
// Self-loops are dropped and parallel links collapsed on construction.
class Topology {
 public:
  Topology(std::vector<std::string> node_ids,
           const std::vector<std::pair<std::string, std::string>>& links,
           std::vector<std::string> labels = {}, std::string name = {});

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::string& name() const { return name_; }

  // Human-readable label; falls back to the id when none was given.
  const std::string& label(std::size_t index) const;

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws ValidationError for an unknown id.
  std::size_t index_of(std::string_view id) const;

  int hops(std::size_t a, std::size_t b) const { return hops_(a, b); }
  int hops(std::string_view a, std::string_view b) const;
  const HopMatrix& hop_matrix() const { return hops_; }

  int diameter() const;

 private:
  std::string name_;
  std::vector<std::string> nodes_;
  std::vector<std::string> labels_;
  std::vector<Link> links_;
  HopMatrix hops_;
};

// Topology Zoo flavoured GraphML. Edge direction and edge data are ignored.
Topology parse_graphml(std::string_view text);
Topology load_graphml(const std::filesystem::path& path);
std::string write_graphml(const Topology& topology);

// Internet2 OS3E backbone shipped with the library.
Topology builtin_os3e();
std::string_view builtin_os3e_graphml();

// Resolves a builtin topology by name ("os3e"); nullopt if unknown.
std::optional<Topology> builtin_topology(std::string_view name);

}  // namespace easm
