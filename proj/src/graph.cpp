#include "zf/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace zf {

Graph::Graph(int n, std::span<const Edge> edges) : n_(n), adj_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 0) throw GraphError("graph order must be non-negative");
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") references a vertex >= n=" +
                       std::to_string(n));
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (int v = 0; v < n; ++v) {
    auto& a = adj_[v];
    std::sort(a.begin(), a.end());
    auto dup = std::adjacent_find(a.begin(), a.end());
    if (dup != a.end()) throw GraphError("duplicate edge (" + std::to_string(v) + "," + std::to_string(*dup) + ")");
  }
  m_ = static_cast<int>(edges.size());
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (int u = 0; u < n_; ++u)
    for (Vertex v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

VertexSet Graph::closed_neighborhood(Vertex v) const {
  VertexSet s = open_neighborhood(v);
  s.insert(v);
  return s;
}

VertexSet Graph::open_neighborhood(Vertex v) const {
  VertexSet s(n_);
  for (Vertex w : adj_[v]) s.insert(w);
  return s;
}

VertexSet Graph::neighborhood(const VertexSet& s) const {
  VertexSet out(n_);
  s.for_each([&](Vertex v) {
    for (Vertex w : adj_[v]) out.insert(w);
  });
  return out - s;
}

std::vector<std::vector<Vertex>> Graph::components(const VertexSet& s) const {
  std::vector<std::vector<Vertex>> comps;
  VertexSet seen(n_);
  std::vector<Vertex> stack;
  s.for_each([&](Vertex root) {
    if (seen.contains(root)) return;
    std::vector<Vertex> comp;
    seen.insert(root);
    stack.push_back(root);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (Vertex w : adj_[u])
        if (s.contains(w) && !seen.contains(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  });
  return comps;
}

bool Graph::induces_connected(const VertexSet& s) const { return components(s).size() <= 1; }

bool Graph::is_connected() const { return n_ == 0 || induces_connected(vertices()); }

// --- Rng ------------------------------------------------------------------

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  while (true) {
    std::uint64_t x = next();
    if (x < limit) return x % bound;
  }
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

// --- generators -----------------------------------------------------------

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace

Graph gen_path(int n) {
  require(n >= 1, "gen_path: n must be >= 1");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph gen_cycle(int n) {
  require(n >= 3, "gen_cycle: n must be >= 3");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph gen_complete(int n) {
  require(n >= 1, "gen_complete: n must be >= 1");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph gen_star(int n) {
  require(n >= 1, "gen_star: n must be >= 1");
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, e);
}

Graph gen_empty(int n) {
  require(n >= 0, "gen_empty: n must be >= 0");
  return Graph(n, std::span<const Edge>{});
}

Graph gen_cubic(int n, std::uint64_t seed) {
  require(n >= 4 && n % 2 == 0, "gen_cubic: n must be even and >= 4");
  Rng rng(seed);
  std::vector<Vertex> points(static_cast<std::size_t>(3 * n));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int i = 0; i < 3 * n; ++i) points[i] = i / 3;
    rng.shuffle(points);
    std::vector<Edge> e;
    bool simple = true;
    for (int i = 0; i < 3 * n && simple; i += 2) {
      auto [u, v] = std::minmax(points[i], points[i + 1]);
      if (u == v) simple = false;
      e.emplace_back(u, v);
    }
    if (!simple) continue;
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) continue;
    Graph g(n, e);
    if (g.is_connected()) return g;
  }
  throw std::runtime_error("gen_cubic: no simple connected pairing found");
}

Graph gen_ring_lattice(int n, int k) {
  require(k >= 2 && k % 2 == 0 && n > k, "ring lattice: need n > k >= 2 with k even");
  std::vector<Edge> e;
  for (int j = 1; j <= k / 2; ++j)
    for (int u = 0; u < n; ++u) e.emplace_back(std::min(u, (u + j) % n), std::max(u, (u + j) % n));
  return Graph(n, e);
}

namespace {
// One rewiring pass over C(n,k) in the classic Watts-Strogatz order: for each
// lattice offset j, each edge (u, u+j) is moved with probability beta to
// (u, w) for a uniformly drawn w that is neither u nor already adjacent.
Graph watts_strogatz_once(int n, int k, double beta, Rng& rng) {
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  auto link = [&](int u, int v, char on) {
    adj[u][v] = adj[v][u] = on;
    deg[u] += on ? 1 : -1;
    deg[v] += on ? 1 : -1;
  };
  for (int j = 1; j <= k / 2; ++j)
    for (int u = 0; u < n; ++u) link(u, (u + j) % n, 1);
  for (int j = 1; j <= k / 2; ++j) {
    for (int u = 0; u < n; ++u) {
      int v = (u + j) % n;
      if (rng.unit() >= beta) continue;
      if (deg[u] >= n - 1) continue;
      int w;
      do {
        w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      } while (w == u || adj[u][w]);
      link(u, v, 0);
      link(u, w, 1);
    }
  }
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adj[u][v]) e.emplace_back(u, v);
  return Graph(n, e);
}
}  // namespace

Graph gen_watts_strogatz(int n, int k, double beta, std::uint64_t seed) {
  require(k >= 2 && k % 2 == 0 && n > k, "gen_watts_strogatz: need n > k >= 2 with k even");
  require(beta >= 0.0 && beta <= 1.0, "gen_watts_strogatz: beta must lie in [0,1]");
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Graph g = watts_strogatz_once(n, k, beta, rng);
    if (g.is_connected()) return g;
  }
  throw std::runtime_error("gen_watts_strogatz: no connected graph within 1000 attempts");
}

Graph gen_random_connected(int n, double p, std::uint64_t seed) {
  require(n >= 1, "gen_random_connected: n must be >= 1");
  require(p >= 0.0 && p <= 1.0, "gen_random_connected: p must lie in [0,1]");
  Rng rng(seed);
  std::vector<Vertex> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[i] = i;
  rng.shuffle(label);
  std::vector<std::vector<char>> has(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    auto [u, v] = std::minmax(label[i], label[j]);
    has[u][v] = 1;
    e.emplace_back(u, v);
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!has[u][v] && rng.unit() < p) e.emplace_back(u, v);
  return Graph(n, e);
}

// --- I/O ------------------------------------------------------------------

GraphFormat parse_graph_format(const std::string& name) {
  if (name == "edge-list" || name == "edge_list" || name == "edgelist" || name == "el") return GraphFormat::edge_list;
  if (name == "dimacs") return GraphFormat::dimacs;
  throw std::invalid_argument("unknown graph format '" + name + "'");
}

GraphFormat guess_graph_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".dimacs" || ext == ".col") return GraphFormat::dimacs;
  return GraphFormat::edge_list;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw GraphError("line " + std::to_string(line) + ": " + what);
}

// Reads integers from one line; fails on trailing garbage.
std::vector<long long> ints(const std::string& body, int line) {
  std::istringstream in(body);
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long x = 0;
    try {
      x = std::stoll(tok, &used);
    } catch (const std::exception&) {
      parse_fail(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(line, "expected an integer, got '" + tok + "'");
    out.push_back(x);
  }
  return out;
}

Graph build_checked(long long n, std::vector<std::pair<Edge, int>> edges) {
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  std::vector<std::vector<Vertex>> seen(static_cast<std::size_t>(n));
  for (auto& [e, line] : edges) {
    auto [u, v] = e;
    if (u < 0 || v < 0 || u >= n || v >= n)
      parse_fail(line, "vertex id out of range for n=" + std::to_string(n));
    if (u == v) parse_fail(line, "self-loop at vertex " + std::to_string(u));
    auto a = std::min(u, v), b = std::max(u, v);
    auto& s = seen[a];
    if (std::find(s.begin(), s.end(), b) != s.end())
      parse_fail(line, "duplicate edge " + std::to_string(a) + " " + std::to_string(b));
    s.push_back(b);
    plain.emplace_back(u, v);
  }
  return Graph(static_cast<int>(n), plain);
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  long long n = -1, m = -1;
  std::vector<std::pair<Edge, int>> edges;
  while (std::getline(in, raw)) {
    ++line;
    auto body = raw.substr(0, raw.find('#'));
    auto v = ints(body, line);
    if (v.empty()) continue;
    if (v.size() != 2) parse_fail(line, "expected two integers");
    if (n < 0) {
      if (v[0] < 1 || v[1] < 0) parse_fail(line, "header must be 'n m' with n >= 1, m >= 0");
      n = v[0];
      m = v[1];
      continue;
    }
    edges.push_back({{static_cast<Vertex>(v[0]), static_cast<Vertex>(v[1])}, line});
  }
  if (n < 0) throw GraphError("missing 'n m' header");
  if (static_cast<long long>(edges.size()) != m)
    throw GraphError("header declares " + std::to_string(m) + " edges but " + std::to_string(edges.size()) +
                     " were listed");
  return build_checked(n, std::move(edges));
}

Graph parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  long long n = -1, m = -1;
  std::vector<std::pair<Edge, int>> edges;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    std::string rest;
    std::getline(ls, rest);
    if (tag == "p") {
      std::istringstream ps(rest);
      std::string kind;
      ps >> kind;
      std::string tail;
      std::getline(ps, tail);
      auto v = ints(tail, line);
      if (v.size() != 2 || v[0] < 1 || v[1] < 0) parse_fail(line, "expected 'p edge n m'");
      n = v[0];
      m = v[1];
    } else if (tag == "e") {
      if (n < 0) parse_fail(line, "edge before 'p' line");
      auto v = ints(rest, line);
      if (v.size() != 2) parse_fail(line, "expected 'e u v'");
      edges.push_back({{static_cast<Vertex>(v[0] - 1), static_cast<Vertex>(v[1] - 1)}, line});
    } else {
      parse_fail(line, "unknown record '" + tag + "'");
    }
  }
  if (n < 0) throw GraphError("missing 'p edge n m' line");
  if (static_cast<long long>(edges.size()) != m)
    throw GraphError("header declares " + std::to_string(m) + " edges but " + std::to_string(edges.size()) +
                     " were listed");
  return build_checked(n, std::move(edges));
}

}  // namespace

Graph parse_graph(const std::string& text, GraphFormat format) {
  return format == GraphFormat::dimacs ? parse_dimacs(text) : parse_edge_list(text);
}

Graph load_graph(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str(), format);
  } catch (const GraphError& e) {
    throw GraphError(path.string() + ": " + e.what());
  }
}

std::string format_graph(const Graph& g, GraphFormat format) {
  std::ostringstream out;
  auto e = g.edges();
  if (format == GraphFormat::dimacs) {
    out << "p edge " << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : e) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  } else {
    out << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : e) out << u << ' ' << v << '\n';
  }
  return out.str();
}

void save_graph(const Graph& g, const std::filesystem::path& path, GraphFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_graph(g, format);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace zf
