#include "oracles.hpp"

#include <deque>
#include <set>

namespace oracle {

namespace {

std::size_t space_size(int q, int n) {
  std::size_t s = 1;
  for (int t = 0; t < n; ++t) s *= static_cast<std::size_t>(q);
  return s;
}

MemberSet empty_set(int q, int n) {
  MemberSet s;
  s.bits.assign((space_size(q, n) + 63) / 64, 0);
  return s;
}

void insert(MemberSet& s, Code c) {
  if (!s.has(c)) {
    s.bits[c >> 6] |= std::uint64_t{1} << (c & 63);
    ++s.count;
  }
}

Code add_scaled(Code a, Code b, int c, int q, int n) {
  const auto va = decode(a, q, n);
  const auto vb = decode(b, q, n);
  std::vector<std::uint8_t> out(n);
  for (int t = 0; t < n; ++t) out[t] = static_cast<std::uint8_t>((va[t] + c * vb[t]) % q);
  return encode(out, q);
}

}  // namespace

Code encode(const std::vector<std::uint8_t>& v, int q) {
  Code c = 0;
  for (auto x : v) c = c * q + x;
  return c;
}

std::vector<std::uint8_t> decode(Code c, int q, int n) {
  std::vector<std::uint8_t> v(n);
  for (int t = n - 1; t >= 0; --t) {
    v[t] = static_cast<std::uint8_t>(c % q);
    c /= q;
  }
  return v;
}

MemberSet members(const std::vector<std::vector<std::uint8_t>>& rows, int q, int n) {
  MemberSet s = empty_set(q, n);
  std::vector<Code> list{0};
  insert(s, 0);
  for (const auto& r : rows) {
    const Code g = encode(r, q);
    if (s.has(g)) continue;
    std::vector<Code> next;
    for (Code m : list) {
      for (int c = 0; c < q; ++c) {
        const Code t = add_scaled(m, g, c, q, n);
        if (!s.has(t)) {
          insert(s, t);
          next.push_back(t);
        }
      }
    }
    list.insert(list.end(), next.begin(), next.end());
  }
  return s;
}

MemberSet members(const qgrass::Subspace& u) {
  std::vector<std::vector<std::uint8_t>> rows;
  for (int r = 0; r < u.dim(); ++r) rows.push_back(u.row(r));
  return members(rows, u.field().value(), u.ambient_dim());
}

MemberSet meet(const MemberSet& a, const MemberSet& b) {
  MemberSet s;
  s.bits.resize(a.bits.size());
  for (std::size_t w = 0; w < a.bits.size(); ++w) {
    s.bits[w] = a.bits[w] & b.bits[w];
    s.count += static_cast<std::size_t>(__builtin_popcountll(s.bits[w]));
  }
  return s;
}

MemberSet join(const MemberSet& a, const MemberSet& b, int q, int n) {
  MemberSet s = empty_set(q, n);
  const std::size_t total = space_size(q, n);
  for (Code x = 0; x < total; ++x) {
    if (!a.has(x)) continue;
    for (Code y = 0; y < total; ++y) {
      if (b.has(y)) insert(s, add_scaled(x, y, 1, q, n));
    }
  }
  return s;
}

bool subset(const MemberSet& a, const MemberSet& b) {
  for (std::size_t w = 0; w < a.bits.size(); ++w) {
    if (a.bits[w] & ~b.bits[w]) return false;
  }
  return true;
}

int dim(const MemberSet& s, int q) {
  int d = 0;
  for (std::size_t c = s.count; c > 1; c /= static_cast<std::size_t>(q)) ++d;
  return d;
}

std::vector<std::vector<int>> naive_rref(std::vector<std::vector<int>> rows, int q) {
  if (rows.empty()) return rows;
  const int n = static_cast<int>(rows[0].size());
  auto inv = [q](int a) {
    for (int b = 1; b < q; ++b) {
      if (a * b % q == 1) return b;
    }
    return 0;
  };
  std::size_t r = 0;
  for (int c = 0; c < n && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] % q == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const int s = inv(rows[r][c] % q);
    for (auto& x : rows[r]) x = x * s % q;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r) continue;
      const int f = rows[o][c] % q;
      if (f == 0) continue;
      for (int t = 0; t < n; ++t) rows[o][t] = ((rows[o][t] - f * rows[r][t]) % q + q) % q;
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::size_t count_subspaces_by_dedup(int n, int l, int q) {
  std::set<std::vector<std::vector<int>>> seen;
  const std::size_t cells = static_cast<std::size_t>(n) * l;
  std::vector<int> digits(cells, 0);
  while (true) {
    std::vector<std::vector<int>> rows(l, std::vector<int>(n));
    for (std::size_t t = 0; t < cells; ++t) rows[t / n][t % n] = digits[t];
    auto r = naive_rref(rows, q);
    if (static_cast<int>(r.size()) == l) seen.insert(std::move(r));
    std::size_t t = 0;
    while (t < cells && ++digits[t] == q) digits[t++] = 0;
    if (t == cells) break;
  }
  return l == 0 ? 1 : seen.size();
}

std::vector<std::vector<int>> basis_rows(const qgrass::Subspace& u) {
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < u.dim(); ++r) {
    const auto row = u.row(r);
    rows.emplace_back(row.begin(), row.end());
  }
  return rows;
}

std::vector<std::vector<int>> intersection_by_scan(const qgrass::Subspace& u, const qgrass::Subspace& v) {
  const int q = u.field().value();
  const int n = u.ambient_dim();
  std::vector<std::vector<int>> rows;
  const std::size_t total = space_size(q, n);
  for (Code c = 0; c < total; ++c) {
    const auto vec = decode(c, q, n);
    if (u.contains(vec) && v.contains(vec)) rows.emplace_back(vec.begin(), vec.end());
  }
  return naive_rref(rows, q);
}

std::vector<std::vector<std::uint32_t>> grassmann_adjacency(const std::vector<qgrass::Subspace>& vertices, int k) {
  std::vector<MemberSet> sets;
  sets.reserve(vertices.size());
  for (const auto& v : vertices) sets.push_back(members(v));
  std::size_t target = 1;
  const int q = vertices.empty() ? 2 : vertices[0].field().value();
  for (int t = 0; t < k - 1; ++t) target *= static_cast<std::size_t>(q);
  std::vector<std::vector<std::uint32_t>> adj(vertices.size());
  for (std::uint32_t a = 0; a < vertices.size(); ++a) {
    for (std::uint32_t b = a + 1; b < vertices.size(); ++b) {
      std::size_t common = 0;
      for (std::size_t w = 0; w < sets[a].bits.size(); ++w) {
        common += static_cast<std::size_t>(__builtin_popcountll(sets[a].bits[w] & sets[b].bits[w]));
      }
      if (common == target) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
  }
  return adj;
}

std::vector<int> bfs(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t source) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

qgrass::ResidueMatrix random_matrix(int rows, int cols, int q, std::mt19937_64& rng) {
  qgrass::ResidueMatrix m(rows, cols);
  std::uniform_int_distribution<int> pick(0, q - 1);
  for (auto& c : m.cells) c = static_cast<std::uint8_t>(pick(rng));
  return m;
}

}  // namespace oracle
