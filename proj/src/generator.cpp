#include "exdecomp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "exdecomp/errors.hpp"

namespace exdecomp {
namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Raw instance on unshuffled ids.
struct Draft {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<Edge> g0;
  VertexSet A0, B0;
  std::vector<VertexSet> A, B;
  int m = 0;
  Params params;
  std::string meta;
};

VertexSet mapped(const VertexSet& s, const std::vector<Vertex>& pi) {
  VertexSet out;
  for (Vertex v : s) out.push_back(pi[v]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> mapped(const std::vector<Edge>& es,
                         const std::vector<Vertex>& pi) {
  std::vector<Edge> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(make_edge(pi[e.u], pi[e.v]));
  return out;
}

// Shuffles vertex ids and builds the instance.
Instance finish(Draft d, Rng& rng) {
  std::vector<Vertex> pi(d.n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);
  std::vector<VertexSet> a, b;
  for (const auto& s : d.A) a.push_back(mapped(s, pi));
  for (const auto& s : d.B) b.push_back(mapped(s, pi));
  Instance inst;
  inst.P = Partition(d.n, d.params.K, d.m, d.params.eps0, mapped(d.A0, pi),
                     mapped(d.B0, pi), std::move(a), std::move(b));
  inst.G = Graph(d.n, mapped(d.edges, pi));
  inst.G0 = Graph(d.n, mapped(d.g0, pi));
  inst.params = d.params;
  inst.meta = d.meta;
  return inst;
}

// All pairs of `side` except the listed ones.
void add_clique_minus(const VertexSet& side, const std::set<Edge>& removed,
                      std::vector<Edge>& out) {
  for (size_t x = 0; x < side.size(); ++x) {
    for (size_t y = x + 1; y < side.size(); ++y) {
      Edge e = make_edge(side[x], side[y]);
      if (!removed.count(e)) out.push_back(e);
    }
  }
}

// Random simple bipartite graph with the given stub lists, repaired by
// 2-swaps until no edge repeats, then further randomized by valid 2-swaps.
std::vector<Edge> random_bipartite(std::vector<Vertex> left,
                                   std::vector<Vertex> right, Rng& rng) {
  if (left.size() != right.size()) {
    throw ContractError("bipartite stub counts differ");
  }
  const int E = static_cast<int>(left.size());
  std::shuffle(right.begin(), right.end(), rng);
  std::multiset<Edge> used;
  for (int k = 0; k < E; ++k) used.insert(make_edge(left[k], right[k]));
  auto swap_ok = [&](int x, int y, bool need_fix) {
    Edge ex = make_edge(left[x], right[x]), ey = make_edge(left[y], right[y]);
    Edge nx = make_edge(left[x], right[y]), ny = make_edge(left[y], right[x]);
    if (nx == ny || used.count(nx) || used.count(ny)) return false;
    if (!need_fix && (used.count(ex) > 1 || used.count(ey) > 1)) return false;
    used.erase(used.find(ex));
    used.erase(used.find(ey));
    used.insert(nx);
    used.insert(ny);
    std::swap(right[x], right[y]);
    return true;
  };
  for (int guard = 0; E > 1; ++guard) {
    int bad = -1;
    for (int k = 0; k < E; ++k) {
      if (used.count(make_edge(left[k], right[k])) > 1) {
        bad = k;
        break;
      }
    }
    if (bad < 0) break;
    if (guard > 100 * E) throw ContractError("bipartite repair did not converge");
    swap_ok(bad, uniform(rng, 0, E - 1), true);
  }
  for (int t = 0; t < E && E > 1; ++t) {
    swap_ok(uniform(rng, 0, E - 1), uniform(rng, 0, E - 1), false);
  }
  return std::vector<Edge>(used.begin(), used.end());
}

Instance noncritical(int n, int K, uint64_t seed) {
  if (n <= 0 || n % 2 != 0) {
    throw InputError("noncritical generator needs even n, got " +
                     std::to_string(n));
  }
  const int n2 = n / 2;
  const int x0 = 4;
  if ((n2 - x0) % K != 0) {
    throw InputError("noncritical generator needs K | n/2 - 4");
  }
  const int m = (n2 - x0) / K;
  // Crossing degree of the exceptional vertices; lighter for larger K so the
  // per-cell degrees stay well inside the window of the candidate step.
  const int ce = std::max(2 * K, static_cast<int>(224LL * n / (2000LL * K)));
  if (x0 * ce > n2 - x0 || x0 * ((ce + K - 1) / K) > m) {
    throw InputError("noncritical generator: n too small for the crossing "
                     "degree of the exceptional vertices");
  }
  Params pr;
  pr.K = K;
  pr.D = n2;
  pr.eps0 = std::max(K >= 3 ? Rational(1, 200) : Rational(1, 100),
                     Rational(2 * x0, n));
  pr.eps = Rational(1, 10);
  pr.eps_prime = Rational(3, 100);
  pr.seed = seed;
  const int64_t K2 = static_cast<int64_t>(K) * K;
  int64_t phi = std::max<int64_t>(x0 - 1, n / 200);
  while ((pr.D - phi) % (2 * K2) != 0) ++phi;
  pr.phi_n = phi;
  const int64_t an = (pr.D - phi) / (2 * K2);
  // Smallest gamma n meeting the cluster-degree bound, and the per-cell
  // maximum degree bound with a 4.5 sigma margin over the expected degree.
  const int64_t g_cluster =
      ((Rational(5) * pr.eps0 * Rational(n) + Rational(10)) / Rational(3))
          .floor() +
      1;
  const double mu = static_cast<double>(ce) / static_cast<double>(K2);
  const double sigma =
      std::sqrt(static_cast<double>(ce) / K * (1.0 / K) * (1.0 - 1.0 / K));
  const int64_t g_degree =
      static_cast<int64_t>(std::ceil(15.0 * (mu + 4.5 * sigma + 2.0) / 16.0));
  const int64_t gmin = std::max(g_cluster, g_degree);
  const int64_t ell = (an - gmin) / 2;
  if (ell < 1) {
    throw InputError("noncritical generator: alpha n = " + std::to_string(an) +
                     " leaves no room for lambda n");
  }
  pr.lambda_n = K2 * ell;
  if (phi >= n2 - x0) throw InputError("noncritical generator: phi n too big");

  Rng rng(seed);
  Draft d;
  d.n = n;
  d.m = m;
  d.params = pr;
  d.meta = "noncritical n=" + std::to_string(n) + " K=" + std::to_string(K);
  std::vector<VertexSet> side(2);
  std::vector<VertexSet> exc(2), clus(2);
  std::vector<std::vector<VertexSet>> clusters(2);
  for (int s = 0; s < 2; ++s) {
    for (int v = 0; v < n2; ++v) side[s].push_back(s * n2 + v);
    VertexSet sh = side[s];
    std::shuffle(sh.begin(), sh.end(), rng);
    exc[s].assign(sh.begin(), sh.begin() + x0);
    clus[s].assign(sh.begin() + x0, sh.end());
    for (int i = 0; i < K; ++i) {
      clusters[s].emplace_back(clus[s].begin() + i * m,
                               clus[s].begin() + (i + 1) * m);
    }
  }
  std::vector<int> hit(n, 0), rnb(n, -1);
  std::vector<Edge>& E = d.edges;
  for (int s = 0; s < 2; ++s) {
    const int t = 1 - s;
    // Crossing edges of the exceptional vertices, balanced over clusters and
    // hitting each cluster vertex at most once.
    std::vector<VertexSet> pool = clusters[t];
    for (auto& c : pool) std::shuffle(c.begin(), c.end(), rng);
    std::vector<size_t> next(K, 0);
    for (int k = 0; k < x0; ++k) {
      Vertex v = exc[s][k];
      for (int j = 0; j < K; ++j) {
        int cnt = ce / K + (((j - k) % K + K) % K < ce % K ? 1 : 0);
        for (int c = 0; c < cnt; ++c) {
          Vertex u = pool[j][next[j]++];
          hit[u] = 1;
          E.push_back(make_edge(v, u));
        }
      }
    }
    // Removed inside edges: each exceptional vertex misses ce - 1 cluster
    // vertices of its own side, all distinct.
    VertexSet sh = clus[s];
    std::shuffle(sh.begin(), sh.end(), rng);
    size_t p = 0;
    for (Vertex v : exc[s]) {
      for (int c = 0; c < ce - 1; ++c) rnb[sh[p++]] = v;
    }
  }
  // Cluster-to-cluster crossing edges complete every crossing degree:
  // 1 + [vertex misses an inside edge] in total.
  std::vector<Vertex> stubs[2];
  for (int s = 0; s < 2; ++s) {
    for (Vertex u : clus[s]) {
      int cc = 1 + (rnb[u] >= 0 ? 1 : 0) - hit[u];
      for (int c = 0; c < cc; ++c) stubs[s].push_back(u);
    }
  }
  auto cross = random_bipartite(stubs[0], stubs[1], rng);
  E.insert(E.end(), cross.begin(), cross.end());
  for (int s = 0; s < 2; ++s) {
    std::set<Edge> removed;
    for (Vertex u : clus[s]) {
      if (rnb[u] >= 0) removed.insert(make_edge(u, rnb[u]));
    }
    add_clique_minus(side[s], removed, E);
    // G0: all pairs of exceptional vertices of the side plus phi n - 3 more
    // inside edges at each of them.
    for (size_t x = 0; x < exc[s].size(); ++x) {
      for (size_t y = x + 1; y < exc[s].size(); ++y) {
        d.g0.push_back(make_edge(exc[s][x], exc[s][y]));
      }
    }
    for (Vertex v : exc[s]) {
      VertexSet cand = clus[s];
      std::shuffle(cand.begin(), cand.end(), rng);
      int64_t need = pr.phi_n - (x0 - 1);
      for (Vertex u : cand) {
        if (need == 0) break;
        if (rnb[u] == v) continue;
        d.g0.push_back(make_edge(v, u));
        --need;
      }
    }
  }
  d.A0 = exc[0];
  d.B0 = exc[1];
  d.A = clusters[0];
  d.B = clusters[1];
  return finish(std::move(d), rng);
}

Instance few_edges(int n, uint64_t seed) {
  if (n < 12 || n % 4 != 0) {
    throw InputError("few_edges generator needs n divisible by 4 and n >= 12, "
                     "got " + std::to_string(n));
  }
  const int n2 = n / 2;
  Params pr;
  pr.K = 1;
  pr.D = n2 - 1;
  pr.phi_n = 1;
  pr.lambda_n = 1;
  pr.eps0 = Rational(std::max(2, n / 100), n);
  pr.eps_prime = Rational(3, 100);
  pr.seed = seed;
  const bool moves = n >= 200;
  pr.eps = moves ? Rational(1, 10LL * n) : Rational(1, 10);
  const int an = static_cast<int>((pr.D - pr.phi_n) / 2);

  Rng rng(seed);
  // Crossing structure: a and b have x crossing edges each, plus a matching
  // of y cluster-to-cluster edges; e = 2x + y stays even and at most alpha n.
  int e = 0, x = 0, y = 0;
  const int top = an - an % 2;
  if (moves) {
    if (top < 32) throw InputError("few_edges generator: alpha n too small");
    e = 2 * uniform(rng, 16, top / 2);
    y = 2 * uniform(rng, 0, e / 8);
  } else {
    if (top < 2) throw InputError("few_edges generator: alpha n too small");
    e = 2 * uniform(rng, 1, top / 2);
    y = 2 * uniform(rng, 0, (e - 2) / 2);
  }
  x = (e - y) / 2;

  Draft d;
  d.n = n;
  d.m = n2 - 1;
  d.params = pr;
  d.meta = "few_edges n=" + std::to_string(n);
  const Vertex a = 0, b = n2;
  VertexSet ca, cb;
  for (int v = 1; v < n2; ++v) {
    ca.push_back(v);
    cb.push_back(n2 + v);
  }
  VertexSet sa = ca, sb = cb;
  std::shuffle(sa.begin(), sa.end(), rng);
  std::shuffle(sb.begin(), sb.end(), rng);
  std::vector<Edge>& E = d.edges;
  // sa[0..x) meet b, sa[x..x+y) are matched to sb[x..x+y), sb[0..x) meet a.
  for (int k = 0; k < x; ++k) {
    E.push_back(make_edge(b, sa[k]));
    E.push_back(make_edge(a, sb[k]));
  }
  for (int k = x; k < x + y; ++k) E.push_back(make_edge(sa[k], sb[k]));
  for (int s = 0; s < 2; ++s) {
    const VertexSet& sh = s == 0 ? sa : sb;
    const Vertex ex = s == 0 ? a : b;
    VertexSet deficit(sh.begin(), sh.begin() + x + y);
    std::shuffle(deficit.begin(), deficit.end(), rng);
    std::set<Edge> removed;
    for (int k = 0; k < x; ++k) removed.insert(make_edge(ex, deficit[k]));
    for (int k = x; k + 1 < x + y; k += 2) {
      removed.insert(make_edge(deficit[k], deficit[k + 1]));
    }
    VertexSet side{ex};
    side.insert(side.end(), sh.begin(), sh.end());
    add_clique_minus(side, removed, E);
    for (Vertex u : sh) {
      if (!removed.count(make_edge(ex, u))) {
        d.g0.push_back(make_edge(ex, u));
        break;
      }
    }
  }
  d.A0 = {a};
  d.B0 = {b};
  d.A = {ca};
  d.B = {cb};
  return finish(std::move(d), rng);
}

}  // namespace

Instance critical_template(int k, uint64_t seed) {
  if (k < 1) throw InputError("critical template needs k >= 1");
  const int n = 4 * k + 1;
  Rng rng(seed);
  Draft d;
  d.n = n;
  d.m = 2 * k;
  d.params.K = 1;
  d.params.D = 2 * k;
  d.params.phi_n = 0;
  d.params.lambda_n = 1;
  d.params.eps0 = n >= 200 ? Rational(1, 100) : Rational(2, n);
  d.params.eps = Rational(1, 10);
  d.params.eps_prime = Rational(3, 100);
  d.params.seed = seed;
  d.meta = "critical k=" + std::to_string(k);
  VertexSet A, B;
  for (int v = 0; v < 2 * k; ++v) {
    A.push_back(v);
    B.push_back(2 * k + v);
  }
  const Vertex a = 4 * k;
  VertexSet sa = A, sb = B;
  std::shuffle(sa.begin(), sa.end(), rng);
  std::shuffle(sb.begin(), sb.end(), rng);
  add_clique_minus(A, {}, d.edges);
  add_clique_minus(B, {}, d.edges);
  for (int t = 0; t < k; ++t) {
    d.edges.push_back(make_edge(a, sa[t]));
    d.edges.push_back(make_edge(a, sb[t]));
    d.edges.push_back(make_edge(sa[k + t], sb[k + t]));
  }
  d.A0 = {a};
  d.A = {A};
  d.B = {B};
  return finish(std::move(d), rng);
}

Instance generate(const GeneratorSpec& spec) {
  if (spec.regime == "noncritical") {
    return noncritical(spec.n ? spec.n : 2000, spec.K ? spec.K : 2, spec.seed);
  }
  if (spec.regime == "critical") {
    if (spec.K > 1) throw InputError("critical generator supports K = 1 only");
    const int n = spec.n ? spec.n : 801;
    if (n % 4 != 1) {
      throw InputError("critical generator needs n = 4k + 1, got " +
                       std::to_string(n));
    }
    const int k = (n - 1) / 4;
    if ((2 * k) % 400 != 0) {
      throw InputError("critical generator: 400 K^2 must divide D - phi n = " +
                       std::to_string(2 * k) + " (use n = 800t + 1)");
    }
    return critical_template(k, spec.seed);
  }
  if (spec.regime == "few_edges") {
    if (spec.K > 1) throw InputError("few_edges generator supports K = 1 only");
    return few_edges(spec.n ? spec.n : 40, spec.seed);
  }
  throw InputError("unknown regime '" + spec.regime + "'");
}

}  // namespace exdecomp
