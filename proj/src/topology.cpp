#include "easm/topology.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "easm/error.hpp"

namespace easm {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

std::string describe_components(std::size_t node_count, const std::vector<int>& component,
                                const std::vector<std::string>* names) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < node_count; ++v) groups[component[v]].push_back(v);
  std::ostringstream out;
  out << "graph is disconnected (" << groups.size() << " components):";
  for (const auto& [id, members] : groups) {
    out << " {";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i != 0) out << ",";
      if (names != nullptr) {
        out << (*names)[members[i]];
      } else {
        out << members[i];
      }
    }
    out << "}";
  }
  return out.str();
}

HopMatrix bfs_all_pairs(std::size_t n, const std::vector<Link>& links,
                        const std::vector<std::string>* names) {
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& link : links) {
    adjacency[link.a].push_back(link.b);
    adjacency[link.b].push_back(link.a);
  }
  HopMatrix hops(n, kUnreached);
  for (std::size_t source = 0; source < n; ++source) {
    std::queue<std::size_t> queue;
    hops(source, source) = 0;
    queue.push(source);
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop();
      for (const auto w : adjacency[v]) {
        if (hops(source, w) == kUnreached) {
          hops(source, w) = hops(source, v) + 1;
          queue.push(w);
        }
      }
    }
  }

  if (n > 0) {
    const bool connected = std::none_of(hops.row(0).begin(), hops.row(0).end(),
                                        [](int h) { return h == kUnreached; });
    if (!connected) {
      std::vector<int> component(n, -1);
      int next = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (component[v] != -1) continue;
        for (std::size_t w = 0; w < n; ++w) {
          if (hops(v, w) != kUnreached) component[w] = next;
        }
        ++next;
      }
      throw ValidationError(describe_components(n, component, names));
    }
  }
  return hops;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

HopMatrix all_pairs_hops(std::size_t node_count, const std::vector<Link>& links) {
  for (const auto& link : links) {
    if (link.a >= node_count || link.b >= node_count) {
      throw ValidationError("link references node index outside the graph");
    }
  }
  return bfs_all_pairs(node_count, links, nullptr);
}

Topology::Topology(std::vector<std::string> node_ids,
                   const std::vector<std::pair<std::string, std::string>>& links,
                   std::vector<std::string> labels, std::string name)
    : name_(std::move(name)) {
  if (!labels.empty() && labels.size() != node_ids.size()) {
    throw ValidationError("label count does not match node count");
  }
  if (node_ids.empty()) throw ValidationError("topology needs at least one node");
  if (labels.empty()) labels = node_ids;

  std::vector<std::size_t> order(node_ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return node_ids[x] < node_ids[y]; });
  nodes_.reserve(order.size());
  labels_.reserve(order.size());
  for (const auto i : order) {
    if (!nodes_.empty() && nodes_.back() == node_ids[i]) {
      throw ValidationError("duplicate node id '" + node_ids[i] + "'");
    }
    nodes_.push_back(std::move(node_ids[i]));
    labels_.push_back(std::move(labels[i]));
  }

  std::set<Link> unique;
  for (const auto& [from, to] : links) {
    const auto a = index_of(from);
    const auto b = index_of(to);
    if (a == b) continue;
    unique.insert(Link{std::min(a, b), std::max(a, b)});
  }
  links_.assign(unique.begin(), unique.end());
  hops_ = bfs_all_pairs(nodes_.size(), links_, &nodes_);
}

const std::string& Topology::label(std::size_t index) const { return labels_.at(index); }

std::optional<std::size_t> Topology::find(std::string_view id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t Topology::index_of(std::string_view id) const {
  if (const auto found = find(id)) return *found;
  throw ValidationError("unknown node '" + std::string(id) + "'");
}

int Topology::hops(std::string_view a, std::string_view b) const {
  return hops_(index_of(a), index_of(b));
}

int Topology::diameter() const {
  const auto values = hops_.values();
  return values.empty() ? 0 : *std::max_element(values.begin(), values.end());
}

Topology parse_graphml(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed GraphML at line " + std::to_string(e.line()) + ": " +
                     e.message());
  }

  const auto root = doc.get_child_optional("graphml");
  if (!root) throw ParseError("missing <graphml> root element");

  std::string label_key;
  for (const auto& [tag, child] : *root) {
    if (tag != "key") continue;
    // "attr.name" contains the default path separator.
    if (child.get(pt::ptree::path_type("<xmlattr>/attr.name", '/'), "") == "label" &&
        child.get("<xmlattr>.for", "node") == "node") {
      label_key = child.get("<xmlattr>.id", "");
    }
  }

  const auto graph = root->get_child_optional("graph");
  if (!graph) throw ParseError("missing <graph> element inside <graphml>");

  std::string name;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::string> seen;
  std::size_t node_number = 0;
  std::size_t edge_number = 0;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      ++node_number;
      const auto id = child.get_optional<std::string>("<xmlattr>.id");
      if (!id || id->empty()) {
        throw ParseError("<node> element #" + std::to_string(node_number) + " has no id");
      }
      if (!seen.insert(*id).second) {
        throw ParseError("<node id=\"" + *id + "\"> declared twice");
      }
      std::string label = *id;
      for (const auto& [data_tag, data] : child) {
        if (data_tag == "data" && !label_key.empty() &&
            data.get("<xmlattr>.key", "") == label_key) {
          label = data.get_value<std::string>();
        }
      }
      ids.push_back(*id);
      labels.push_back(std::move(label));
    } else if (tag == "edge") {
      ++edge_number;
      const auto source = child.get_optional<std::string>("<xmlattr>.source");
      const auto target = child.get_optional<std::string>("<xmlattr>.target");
      if (!source || !target) {
        throw ParseError("<edge> element #" + std::to_string(edge_number) +
                         " lacks source or target");
      }
      edges.emplace_back(*source, *target);
    } else if (tag == "data") {
      name = child.get_value<std::string>();
    }
  }
  for (const auto& [source, target] : edges) {
    for (const auto* end : {&source, &target}) {
      if (!seen.contains(*end)) {
        throw ParseError("<edge source=\"" + source + "\" target=\"" + target +
                         "\"> references undeclared node '" + *end + "'");
      }
    }
  }
  if (ids.empty()) throw ParseError("<graph> element declares no nodes");
  return Topology(std::move(ids), edges, std::move(labels), std::move(name));
}

Topology load_graphml(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open GraphML file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graphml(buffer.str());
}

std::string write_graphml(const Topology& topology) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key attr.name=\"label\" attr.type=\"string\" for=\"node\" id=\"d0\" />\n"
      << "  <key attr.name=\"Network\" attr.type=\"string\" for=\"graph\" id=\"d1\" />\n"
      << "  <graph edgedefault=\"undirected\">\n";
  if (!topology.name().empty()) {
    out << "    <data key=\"d1\">" << xml_escape(topology.name()) << "</data>\n";
  }
  for (std::size_t i = 0; i < topology.node_count(); ++i) {
    out << "    <node id=\"" << xml_escape(topology.nodes()[i]) << "\">\n"
        << "      <data key=\"d0\">" << xml_escape(topology.label(i)) << "</data>\n"
        << "    </node>\n";
  }
  for (const auto& link : topology.links()) {
    out << "    <edge source=\"" << xml_escape(topology.nodes()[link.a]) << "\" target=\""
        << xml_escape(topology.nodes()[link.b]) << "\" />\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

Topology builtin_os3e() { return parse_graphml(builtin_os3e_graphml()); }

std::optional<Topology> builtin_topology(std::string_view name) {
  if (name == "os3e" || name == "OS3E") return builtin_os3e();
  return std::nullopt;
}

}  // namespace easm
