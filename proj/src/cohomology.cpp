#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "rgc/geometry.hpp"
#include "rgc/homology.hpp"

namespace rgc::homology {
namespace {

constexpr std::uint32_t kNone = 0xffffffffu;
constexpr int kMaxTopVertices = 8;

// Ranks and coface lists of the stored levels. Rows and columns are ordered
// by (radius, index); the implicit top level is ordered by (rank of its
// youngest facet, vertex tuple), which is also a valid filtration order.
struct Levels {
  const SimplicialComplex& cx;
  int top;
  std::vector<std::vector<std::uint32_t>> rank, by_rank;
  // facets[k][i*(k+1)+j]: index of simplex i of level k without its vertex j.
  std::vector<std::vector<std::uint32_t>> facets;
  // Cofaces of level k into level k+1 as (extra vertex, index), CSR sorted
  // by the extra vertex.
  std::vector<std::vector<std::size_t>> co_off;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> co;

  std::span<const std::pair<std::uint32_t, std::uint32_t>> cofaces(int k, std::size_t i) const {
    return {co[k].data() + co_off[k][i], co_off[k][i + 1] - co_off[k][i]};
  }
};

Levels index_levels(const SimplicialComplex& cx, int top) {
  Levels lv{cx, top, {}, {}, {}, {}, {}};
  lv.rank.resize(top + 1);
  lv.by_rank.resize(top + 1);
  lv.facets.resize(top + 1);
  lv.co_off.resize(top + 1);
  lv.co.resize(top + 1);
  for (int k = 0; k <= top; ++k) {
    const auto& radii = cx.radii(k);
    auto& order = lv.by_rank[k];
    order.resize(radii.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return radii[a] < radii[b]; });
    lv.rank[k].resize(order.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) lv.rank[k][order[r]] = r;
  }
  std::array<std::uint32_t, 64> facet{};
  for (int k = 1; k <= top; ++k) {
    const std::size_t count = cx.count(k);
    auto& fac = lv.facets[k];
    fac.resize(count * (k + 1));
    std::vector<std::size_t> bucket(cx.count(k - 1) + 1, 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto s = cx.simplex(k, i);
      for (int j = 0; j <= k; ++j) {
        int w = 0;
        for (int v = 0; v <= k; ++v)
          if (v != j) facet[w++] = s[v];
        const std::int64_t f = cx.find({facet.data(), static_cast<std::size_t>(k)});
        if (f < 0) throw PreconditionError("complex is not closed under faces");
        fac[i * (k + 1) + j] = static_cast<std::uint32_t>(f);
        ++bucket[f + 1];
      }
    }
    std::partial_sum(bucket.begin(), bucket.end(), bucket.begin());
    auto& list = lv.co[k - 1];
    list.resize(bucket.back());
    std::vector<std::size_t> fill(bucket.begin(), bucket.end() - 1);
    for (std::size_t i = 0; i < count; ++i) {
      const auto s = cx.simplex(k, i);
      for (int j = 0; j <= k; ++j) list[fill[fac[i * (k + 1) + j]]++] = {s[j], static_cast<std::uint32_t>(i)};
    }
    for (std::size_t f = 0; f + 1 < bucket.size(); ++f)
      std::sort(list.begin() + bucket[f], list.begin() + bucket[f + 1]);
    lv.co_off[k - 1] = std::move(bucket);
  }
  return lv;
}

void symmetric_add(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                   std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

// Rank of the coboundary from level k into the stored level k+1. Marks the
// pivot rows in `cleared_next`.
std::size_t reduce_stored(const Levels& lv, int k, const std::vector<char>& cleared,
                          std::vector<char>& cleared_next, CohomologyStats& stats) {
  const std::size_t rows = lv.cx.count(k + 1);
  struct Owner {
    std::uint32_t column, stored;
  };
  std::vector<Owner> owner(rows, {kNone, kNone});
  std::vector<std::vector<std::uint32_t>> stored;
  cleared_next.assign(rows, 0);
  std::vector<std::uint32_t> col, other, scratch;
  auto raw = [&](std::uint32_t i, std::vector<std::uint32_t>& out) {
    out.clear();
    for (const auto& [w, t] : lv.cofaces(k, i)) out.push_back(lv.rank[k + 1][t]);
    std::sort(out.begin(), out.end());
  };
  std::size_t rank = 0;
  const auto& order = lv.by_rank[k];
  for (std::size_t r = order.size(); r-- > 0;) {
    const std::uint32_t i = order[r];
    if (!cleared.empty() && cleared[i]) continue;
    ++stats.columns;
    raw(i, col);
    bool added = false;
    for (;;) {
      if (col.empty()) {
        ++stats.zero;
        break;
      }
      const std::uint32_t p = col.front();
      if (owner[p].column == kNone) {
        owner[p].column = i;
        if (added) {
          owner[p].stored = static_cast<std::uint32_t>(stored.size());
          stored.push_back(col);
        }
        cleared_next[lv.by_rank[k + 1][p]] = 1;
        ++rank;
        break;
      }
      if (owner[p].stored != kNone) {
        symmetric_add(col, stored[owner[p].stored], scratch);
      } else {
        raw(owner[p].column, other);
        symmetric_add(col, other, scratch);
      }
      added = true;
    }
    if (added) ++stats.reduced;
  }
  return rank;
}

struct TopKey {
  std::uint32_t rank;
  std::array<std::uint32_t, kMaxTopVertices> v;
  auto operator<=>(const TopKey&) const = default;
};

struct TopKeyHash {
  std::size_t operator()(const TopKey& key) const {
    std::uint64_t h = key.rank * 0x9e3779b97f4a7c15ULL;
    for (std::uint32_t x : key.v) h = (h ^ x) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Cofaces of the top stored level, generated on demand.
class ImplicitTop {
 public:
  ImplicitTop(const Levels& lv, const PointCloud& cloud, double tol)
      : lv_(lv), cloud_(cloud), metric_(cloud.metric()), k_(lv.top), d_(cloud.dim()), tol_(tol),
        buffer_(static_cast<std::size_t>(kMaxTopVertices) * cloud.dim()) {}

  // Pivot of the raw coboundary when some coface has column s as its
  // youngest facet; such a pair can never be claimed by an earlier column.
  std::optional<TopKey> apparent(std::uint32_t s) {
    candidates(s);
    const std::uint32_t own = lv_.rank[k_][s];
    std::optional<TopKey> best;
    for (std::size_t c = 0; c < cand_w_.size(); ++c) {
      bool youngest = true;
      for (int j = 0; j <= k_ && youngest; ++j) youngest = lv_.rank[k_][cand_t_[c * (k_ + 1) + j]] < own;
      if (!youngest) continue;
      TopKey key = make_key(s, cand_w_[c], own);
      if (best && !(key < *best)) continue;
      if (member(s, c)) best = key;
    }
    return best;
  }

  void raw(std::uint32_t s, std::vector<TopKey>& out) {
    out.clear();
    candidates(s);
    const std::uint32_t own = lv_.rank[k_][s];
    for (std::size_t c = 0; c < cand_w_.size(); ++c) {
      if (!member(s, c)) continue;
      std::uint32_t r = own;
      for (int j = 0; j <= k_; ++j) r = std::max(r, lv_.rank[k_][cand_t_[c * (k_ + 1) + j]]);
      out.push_back(make_key(s, cand_w_[c], r));
    }
    std::sort(out.begin(), out.end());
  }

 private:
  // Vertices w whose join with every facet of s is a stored simplex, with
  // the indices of those joins.
  void candidates(std::uint32_t s) {
    cand_w_.clear();
    cand_t_.clear();
    const std::uint32_t* fac = lv_.facets[k_].data() + static_cast<std::size_t>(s) * (k_ + 1);
    std::array<std::span<const std::pair<std::uint32_t, std::uint32_t>>, kMaxTopVertices> lists;
    std::array<std::size_t, kMaxTopVertices> pos{};
    for (int j = 0; j <= k_; ++j) lists[j] = lv_.cofaces(k_ - 1, fac[j]);
    std::array<std::uint32_t, kMaxTopVertices> joined{};
    for (const auto& [w, t0] : lists[0]) {
      joined[0] = t0;
      bool all = true;
      for (int j = 1; j <= k_ && all; ++j) {
        auto& p = pos[j];
        while (p < lists[j].size() && lists[j][p].first < w) ++p;
        if (p == lists[j].size()) return;
        if (lists[j][p].first != w) all = false;
        else joined[j] = lists[j][p].second;
      }
      if (!all) continue;
      cand_w_.push_back(w);
      cand_t_.insert(cand_t_.end(), joined.begin(), joined.begin() + k_ + 1);
    }
  }

  TopKey make_key(std::uint32_t s, std::uint32_t w, std::uint32_t rank) const {
    TopKey key{rank, {}};
    const auto verts = lv_.cx.simplex(k_, s);
    int out = 0;
    bool placed = false;
    for (std::uint32_t v : verts) {
      if (!placed && w < v) {
        key.v[out++] = w;
        placed = true;
      }
      key.v[out++] = v;
    }
    if (!placed) key.v[out++] = w;
    return key;
  }

  // Whether s + w has a smallest enclosing ball of radius <= eps. Decided
  // from the coface alone: test the largest vertex against the ball of the
  // opposite facet, else solve the full ball.
  bool member(std::uint32_t s, std::size_t c) {
    const std::uint32_t w = cand_w_[c];
    const auto verts = lv_.cx.simplex(k_, s);
    const bool w_last = w > verts.back();
    const std::uint32_t f = w_last ? s : cand_t_[c * (k_ + 1) + k_];
    const std::uint32_t last = w_last ? w : verts.back();
    const std::uint32_t first = lv_.cx.simplex(k_, f)[0];
    const double* base = cloud_.coords.data() + static_cast<std::size_t>(first) * d_;
    const double* pl = cloud_.coords.data() + static_cast<std::size_t>(last) * d_;
    const double* centre = lv_.cx.center(k_, f, d_);
    const double rf = lv_.cx.radius(k_, f);
    double dist2 = 0.0;
    for (int a = 0; a < d_; ++a) {
      const double t = base[a] + metric_.wrap(pl[a] - base[a]) - centre[a];
      dist2 += t * t;
    }
    if (dist2 <= rf * rf) return true;
    const TopKey key = make_key(s, w, 0);
    unwrap_points(cloud_, key.v.data(), k_ + 2, buffer_.data());
    return geometry::min_enclosing_radius(buffer_.data(), k_ + 2, d_, tol_, nullptr) <= lv_.cx.epsilon();
  }

  const Levels& lv_;
  const PointCloud& cloud_;
  Metric metric_;
  int k_, d_;
  double tol_;
  std::vector<double> buffer_;
  std::vector<std::uint32_t> cand_w_, cand_t_;
};

std::size_t reduce_implicit(const Levels& lv, const PointCloud& cloud, double tol, const std::vector<char>& cleared,
                            CohomologyStats& stats) {
  ImplicitTop top(lv, cloud, tol);
  struct Owner {
    std::uint32_t column, stored;
  };
  std::unordered_map<TopKey, Owner, TopKeyHash> owner;
  owner.reserve(lv.cx.count(lv.top));
  std::vector<std::vector<TopKey>> stored;
  std::vector<TopKey> col, other, scratch;
  auto add = [&](const std::vector<TopKey>& b) {
    scratch.clear();
    std::set_symmetric_difference(col.begin(), col.end(), b.begin(), b.end(), std::back_inserter(scratch));
    col.swap(scratch);
  };
  std::size_t rank = 0;
  const auto& order = lv.by_rank[lv.top];
  for (std::size_t r = order.size(); r-- > 0;) {
    const std::uint32_t s = order[r];
    if (!cleared.empty() && cleared[s]) continue;
    ++stats.columns;
    if (const auto pivot = top.apparent(s)) {
      if (owner.emplace(*pivot, Owner{s, kNone}).second) {
        ++stats.apparent;
        ++rank;
        continue;
      }
    }
    top.raw(s, col);
    bool added = false;
    for (;;) {
      if (col.empty()) {
        ++stats.zero;
        break;
      }
      const auto it = owner.find(col.front());
      if (it == owner.end()) {
        Owner o{s, kNone};
        if (added) {
          o.stored = static_cast<std::uint32_t>(stored.size());
          stored.push_back(col);
        }
        owner.emplace(col.front(), o);
        ++rank;
        break;
      }
      if (it->second.stored != kNone) {
        add(stored[it->second.stored]);
      } else {
        top.raw(it->second.column, other);
        add(other);
      }
      added = true;
    }
    if (added) ++stats.reduced;
  }
  return rank;
}

}  // namespace

std::vector<std::size_t> cech_betti(const SimplicialComplex& complex, const PointCloud& cloud, int max_k,
                                    double tol, CohomologyStats* stats) {
  if (max_k < 0) throw PreconditionError("max_k must be nonnegative");
  const int built = complex.built_dim();
  const bool implicit = built == max_k;
  if (built < max_k) throw InsufficientDimensionError("complex must be built through dimension max_k");
  if (implicit && (max_k < 1 || !complex.has_centers(max_k)))
    throw PreconditionError("implicit top level needs max_k >= 1 and stored ball centres");
  if (implicit && max_k + 2 > kMaxTopVertices) throw PreconditionError("implicit route supports max_k <= 6");

  CohomologyStats local;
  CohomologyStats& st = stats ? *stats : local;
  const Levels lv = index_levels(complex, implicit ? max_k : max_k + 1);
  std::vector<std::size_t> ranks(static_cast<std::size_t>(max_k) + 1, 0);
  std::vector<char> cleared, next;
  for (int k = 0; k <= max_k; ++k) {
    if (implicit && k == max_k) {
      ranks[k] = reduce_implicit(lv, cloud, tol, cleared, st);
    } else {
      ranks[k] = reduce_stored(lv, k, cleared, next, st);
      cleared.swap(next);
    }
  }
  std::vector<std::size_t> betti(ranks.size());
  for (int k = 0; k <= max_k; ++k) betti[k] = complex.count(k) - ranks[k] - (k > 0 ? ranks[k - 1] : 0);
  return betti;
}

std::vector<std::size_t> cech_betti(const PointCloud& cloud, double eps, int max_k, const CechOptions& options,
                                    CohomologyStats* stats) {
  CechOptions opts = options;
  opts.keep_centers = true;
  const int dim = std::max(max_k, 1);
  const SimplicialComplex complex = build_cech(cloud, eps, dim, opts);
  return cech_betti(complex, cloud, max_k, opts.tol, stats);
}

}  // namespace rgc::homology
