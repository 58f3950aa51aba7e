#include "qmc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

std::string describe(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.i << ", " << e.j << ")";
  return os.str();
}

// 53-bit uniform double in [0, 1); independent of the standard library's
// distribution implementations so generated instances are portable.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (!tok.empty() && *first == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

Graph parse_edge_list(std::string_view text) {
  std::optional<int> declared_n;
  std::vector<Edge> edges;
  bool seen_content = false;
  int max_id = -1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    auto fail = [&](const std::string& why) {
      throw InputError("edge list line " + std::to_string(line_no) + ": " + why);
    };
    if (!seen_content && tokens.size() == 1) {
      int n = 0;
      if (!parse_number(tokens[0], n) || n < 0) fail("expected a nonnegative vertex count");
      declared_n = n;
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (tokens.size() != 2 && tokens.size() != 3) fail("expected \"i j w\"");
    Edge e;
    if (!parse_number(tokens[0], e.i) || !parse_number(tokens[1], e.j) || e.i < 0 || e.j < 0) {
      fail("vertex ids must be nonnegative integers");
    }
    if (tokens.size() == 3 && !parse_number(tokens[2], e.w)) fail("malformed weight");
    if (!std::isfinite(e.w)) fail("weight must be finite");
    if (e.w < 0) fail("negative weight on edge " + describe(e));
    if (e.i == e.j) fail("self-loop on vertex " + std::to_string(e.i));
    max_id = std::max({max_id, e.i, e.j});
    edges.push_back(e);
  }
  int n = declared_n.value_or(max_id + 1);
  if (declared_n && max_id >= *declared_n) {
    throw InputError("edge list: vertex id " + std::to_string(max_id) +
                     " out of range for declared n = " + std::to_string(*declared_n));
  }
  return Graph(n, std::move(edges));
}

Graph parse_json_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array()) {
    throw InputError("graph JSON: expected an object with an \"edges\" array");
  }
  std::vector<Edge> edges;
  int max_id = -1;
  std::size_t k = 0;
  for (const auto& item : doc["edges"]) {
    auto fail = [&](const std::string& why) {
      throw InputError("graph JSON edge " + std::to_string(k) + ": " + why);
    };
    if (!item.is_array() || item.size() < 2 || item.size() > 3) fail("expected [i, j, w]");
    if (!item[0].is_number_integer() || !item[1].is_number_integer()) fail("vertex ids must be integers");
    Edge e{item[0].get<int>(), item[1].get<int>(), 1.0};
    if (item.size() == 3) {
      if (!item[2].is_number()) fail("weight must be a number");
      e.w = item[2].get<double>();
    }
    if (e.i < 0 || e.j < 0) fail("vertex ids must be nonnegative");
    if (e.w < 0) fail("negative weight on edge " + describe(e));
    if (e.i == e.j) fail("self-loop on vertex " + std::to_string(e.i));
    max_id = std::max({max_id, e.i, e.j});
    edges.push_back(e);
    ++k;
  }
  int n = max_id + 1;
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<int>() < 0) {
      throw InputError("graph JSON: \"n\" must be a nonnegative integer");
    }
    n = doc["n"].get<int>();
    if (max_id >= n) throw InputError("graph JSON: vertex id out of range for declared n");
  }
  return Graph(n, std::move(edges));
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw InputError("vertex count must be nonnegative");
  for (auto& e : edges_) {
    if (e.i == e.j) throw InputError("self-loop on vertex " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_) throw InputError("edge " + describe(e) + " out of range");
    if (!(e.w >= 0) || !std::isfinite(e.w)) throw InputError("edge " + describe(e) + " has invalid weight");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw InputError("duplicate edge " + describe(edges_[k]));
    }
  }
}

std::optional<std::size_t> Graph::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(i, j),
                             [](const Edge& e, const std::pair<int, int>& key) {
                               return std::pair(e.i, e.j) < key;
                             });
  if (it == edges_.end() || it->i != i || it->j != j) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

double Graph::total_weight() const {
  double total = 0;
  for (const auto& e : edges_) total += e.w;
  return total;
}

NeighborIndex::NeighborIndex(const Graph& g) : adjacency_(g.num_vertices()) {
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    adjacency_[e.i].push_back({e.j, e.w, k});
    adjacency_[e.j].push_back({e.i, e.w, k});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
}

bool NeighborIndex::adjacent(int u, int v) const {
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), Neighbor{v, 0.0, 0},
                            [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
}

Graph parse_graph(std::string_view text, GraphFormat format) {
  return format == GraphFormat::Json ? parse_json_graph(text) : parse_edge_list(text);
}

std::string serialize_graph(const Graph& g, GraphFormat format) {
  if (format == GraphFormat::Json) {
    nlohmann::json doc;
    doc["n"] = g.num_vertices();
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges()) doc["edges"].push_back({e.i, e.j, e.w});
    return doc.dump();
  }
  std::ostringstream os;
  os << std::setprecision(17);
  os << g.num_vertices() << "\n";
  for (const auto& e : g.edges()) os << e.i << " " << e.j << " " << e.w << "\n";
  return os.str();
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return parse_graph(buf.str(), json ? GraphFormat::Json : GraphFormat::EdgeList);
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  auto colon = text.find(':');
  std::string_view kind = text.substr(0, colon);
  if (kind == "complete") {
    spec.kind = GraphKind::Complete;
  } else if (kind == "cycle") {
    spec.kind = GraphKind::Cycle;
  } else if (kind == "star") {
    spec.kind = GraphKind::Star;
  } else if (kind == "path") {
    spec.kind = GraphKind::Path;
  } else if (kind == "erdos_renyi" || kind == "gnp") {
    spec.kind = GraphKind::ErdosRenyi;
  } else {
    throw InputError("unknown generator kind: " + std::string(kind));
  }
  std::optional<double> wmin, wmax;
  bool have_size = false;
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view kv = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw InputError("generator parameter without '=': " + std::string(kv));
    std::string_view key = kv.substr(0, eq);
    std::string_view value = kv.substr(eq + 1);
    auto bad = [&] { return InputError("bad generator parameter: " + std::string(kv)); };
    if (key == "n" || key == "d") {
      if (!parse_number(value, spec.n)) throw bad();
      have_size = true;
    } else if (key == "p") {
      if (!parse_number(value, spec.p)) throw bad();
    } else if (key == "seed") {
      if (!parse_number(value, spec.seed)) throw bad();
    } else if (key == "wmin") {
      double v;
      if (!parse_number(value, v)) throw bad();
      wmin = v;
    } else if (key == "wmax") {
      double v;
      if (!parse_number(value, v)) throw bad();
      wmax = v;
    } else {
      throw bad();
    }
  }
  if (!have_size) throw InputError("generator spec needs n= (or d= for star)");
  if (wmin || wmax) spec.weight_range = std::pair(wmin.value_or(1.0), wmax.value_or(wmin.value_or(1.0)));
  return spec;
}

std::string to_string(const GeneratorSpec& spec) {
  std::ostringstream os;
  switch (spec.kind) {
    case GraphKind::Complete: os << "complete:n=" << spec.n; break;
    case GraphKind::Cycle: os << "cycle:n=" << spec.n; break;
    case GraphKind::Star: os << "star:d=" << spec.n; break;
    case GraphKind::Path: os << "path:n=" << spec.n; break;
    case GraphKind::ErdosRenyi: os << "erdos_renyi:n=" << spec.n << ",p=" << spec.p; break;
  }
  if (spec.kind == GraphKind::ErdosRenyi || spec.weight_range) os << ",seed=" << spec.seed;
  if (spec.weight_range) os << ",wmin=" << spec.weight_range->first << ",wmax=" << spec.weight_range->second;
  return os.str();
}

Graph generate(const GeneratorSpec& spec) {
  if (spec.kind == GraphKind::Star ? spec.n < 0 : spec.n < 1) {
    throw InputError("generator: vertex count must be at least 1");
  }
  if (spec.kind == GraphKind::Cycle && spec.n < 3) throw InputError("generator: cycle needs n >= 3");
  if (spec.kind == GraphKind::ErdosRenyi && !(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw InputError("generator: p must lie in [0, 1]");
  }
  if (spec.weight_range) {
    auto [lo, hi] = *spec.weight_range;
    if (!(lo >= 0 && hi >= lo)) throw InputError("generator: need 0 <= wmin <= wmax");
  }

  std::mt19937_64 rng(spec.seed);
  auto weight = [&] {
    if (!spec.weight_range) return 1.0;
    auto [lo, hi] = *spec.weight_range;
    return lo + (hi - lo) * uniform01(rng);
  };

  std::vector<Edge> edges;
  int n = spec.n;
  switch (spec.kind) {
    case GraphKind::Complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight()});
      break;
    case GraphKind::Cycle:
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight()});
      break;
    case GraphKind::Path:
      for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight()});
      break;
    case GraphKind::Star:
      n = spec.n + 1;
      for (int leaf = 1; leaf < n; ++leaf) edges.push_back({0, leaf, weight()});
      break;
    case GraphKind::ErdosRenyi:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          // draw unconditionally so the weight stream does not depend on p
          double u = uniform01(rng);
          double w = weight();
          if (u < spec.p) edges.push_back({i, j, w});
        }
      break;
  }
  return Graph(n, std::move(edges));
}

}  // namespace qmc
