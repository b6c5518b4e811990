#include "mgoig/concept_core.hpp"

#include <algorithm>
#include <set>

namespace mgoig {

namespace {

void canonicalize(std::vector<uint32_t>& v, uint32_t full_mask) {
  for (auto& b : v) b &= full_mask;
  std::sort(v.begin(), v.end(), LexLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Enumerates subsets of `pool` of size k, ascending lexicographically by
// index list, calling fn(mask). Returns false if fn ever returns false.
template <typename Fn>
bool for_each_subset_of_size(const std::vector<int>& pool, int k, Fn&& fn) {
  int n = static_cast<int>(pool.size());
  if (k > n) return true;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  for (;;) {
    uint32_t mask = 0;
    for (int i : idx) mask |= (1u << pool[static_cast<size_t>(i)]);
    if (!fn(mask)) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

bool shatters(const ConceptClass& c, uint32_t subset_mask) {
  int k = popcount32(subset_mask);
  if (c.size() < (1ull << k)) return false;
  std::vector<char> seen(1ull << k, 0);
  int distinct = 0;
  for (uint32_t b : c.members()) {
    uint32_t p = gather_bits(b, subset_mask);
    if (!seen[p]) {
      seen[p] = 1;
      if (++distinct == (1 << k)) return true;
    }
  }
  return false;
}

int vc_over_pool(const ConceptClass& c, const std::vector<int>& pool) {
  int best = 0;
  int n = static_cast<int>(pool.size());
  for (int k = 1; k <= n; ++k) {
    bool found = false;
    for_each_subset_of_size(pool, k, [&](uint32_t mask) {
      if (shatters(c, mask)) {
        found = true;
        return false;
      }
      return true;
    });
    if (!found) break;  // no shattered set at this level, larger levels can't help
    best = k;
    if (c.size() < (1ull << (k + 1))) break;
  }
  return best;
}

}  // namespace

ConceptClass::ConceptClass(Domain dom, std::vector<uint32_t> members)
    : dom_(dom), members_(std::move(members)) {
  canonicalize(members_, dom_.full_mask());
  if (members_.empty()) throw std::invalid_argument("concept class must be nonempty");
}

bool ConceptClass::contains(uint32_t bits) const {
  return std::binary_search(members_.begin(), members_.end(), bits, LexLess{});
}

GroupFamily::GroupFamily(Domain dom, std::vector<uint32_t> masks)
    : dom_(dom), masks_(std::move(masks)) {
  canonicalize(masks_, dom_.full_mask());
  for (uint32_t g : masks_)
    if (g == 0) throw std::invalid_argument("group masks must be nonempty");
}

std::vector<int> LabeledSample::distinct_points() const {
  std::set<int> s;
  for (auto& [p, y] : entries) {
    (void)y;
    s.insert(p);
  }
  return {s.begin(), s.end()};
}

bool LabeledSample::duplicates_consistent() const {
  std::vector<std::pair<int, int>> e = entries;
  std::sort(e.begin(), e.end());
  for (size_t i = 1; i < e.size(); ++i)
    if (e[i].first == e[i - 1].first && e[i].second != e[i - 1].second) return false;
  return true;
}

void LabeledSample::validate_against(const Domain& d) const {
  for (auto& [p, y] : entries) {
    if (p < 0 || p >= d.m) throw std::invalid_argument("sample point out of domain");
    if (y != 0 && y != 1) throw std::invalid_argument("sample label must be 0/1");
  }
}

int vc_dimension(const ConceptClass& c) {
  std::vector<int> pool(static_cast<size_t>(c.domain().m));
  for (int i = 0; i < c.domain().m; ++i) pool[static_cast<size_t>(i)] = i;
  return vc_over_pool(c, pool);
}

int vc_restricted(const ConceptClass& c, uint32_t group_mask) {
  std::vector<int> pool;
  for (int i = 0; i < c.domain().m; ++i)
    if (bit_get(group_mask, i)) pool.push_back(i);
  if (pool.empty()) return 0;
  return vc_over_pool(c, pool);
}

ConceptClass enumerate_group_realizable(const ConceptClass& H, const GroupFamily& G,
                                        int enumeration_cap) {
  if (!(H.domain() == G.domain()))
    throw std::invalid_argument("class and family must share a domain");
  int m = H.domain().m;
  if (m > enumeration_cap)
    throw Error(Errc::DomainTooLarge, "group-realizable enumeration needs 2^m work; m exceeds cap");

  // For each group, the set of achievable restrictions {h & g : h in H}.
  std::vector<std::vector<uint32_t>> reachable(G.size());
  for (size_t j = 0; j < G.size(); ++j) {
    std::vector<uint32_t> r;
    r.reserve(H.size());
    for (uint32_t h : H.members()) r.push_back(h & G.at(j));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    reachable[j] = std::move(r);
  }

  std::vector<uint32_t> out;
  uint32_t total = (m == 31) ? 0x7fffffffu : ((1u << m) - 1u);
  for (uint32_t c = 0;; ++c) {
    bool ok = true;
    for (size_t j = 0; ok && j < G.size(); ++j) {
      uint32_t want = c & G.at(j);
      ok = std::binary_search(reachable[j].begin(), reachable[j].end(), want);
    }
    if (ok) out.push_back(c);
    if (c == total) break;
  }
  return ConceptClass(H.domain(), std::move(out));
}

ConceptClass project_class(const ConceptClass& c, const std::vector<int>& points) {
  if (points.empty()) throw std::invalid_argument("projection needs at least one point");
  Domain nd(static_cast<int>(points.size()));
  std::vector<uint32_t> out;
  out.reserve(c.size());
  for (uint32_t b : c.members()) {
    uint32_t p = 0;
    for (size_t i = 0; i < points.size(); ++i)
      if (bit_get(b, points[i])) p |= (1u << i);
    out.push_back(p);
  }
  return ConceptClass(nd, std::move(out));
}

std::vector<uint32_t> project_masks(const GroupFamily& g, const std::vector<int>& points) {
  std::vector<uint32_t> out;
  for (uint32_t mask : g.masks()) {
    uint32_t p = 0;
    for (size_t i = 0; i < points.size(); ++i)
      if (bit_get(mask, points[i])) p |= (1u << i);
    if (p != 0) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConceptClass make_thresholds(Domain d) {
  std::vector<uint32_t> out;
  for (int t = 0; t <= d.m; ++t) {
    uint32_t b = 0;
    for (int i = t; i < d.m; ++i) b |= (1u << i);
    out.push_back(b);
  }
  return ConceptClass(d, std::move(out));
}

ConceptClass make_intervals(Domain d) {
  std::vector<uint32_t> out{0};
  for (int a = 0; a < d.m; ++a)
    for (int b = a + 1; b <= d.m; ++b) {
      uint32_t bits = 0;
      for (int i = a; i < b; ++i) bits |= (1u << i);
      out.push_back(bits);
    }
  return ConceptClass(d, std::move(out));
}

ConceptClass make_singletons(Domain d) {
  std::vector<uint32_t> out;
  for (int i = 0; i < d.m; ++i) out.push_back(1u << i);
  return ConceptClass(d, std::move(out));
}

ConceptClass make_full_cube(Domain d, int enumeration_cap) {
  if (d.m > enumeration_cap)
    throw Error(Errc::DomainTooLarge, "full cube exceeds enumeration cap");
  std::vector<uint32_t> out;
  out.reserve(1u << d.m);
  for (uint32_t c = 0; c < (1u << d.m); ++c) out.push_back(c);
  return ConceptClass(d, std::move(out));
}

ConceptClass make_explicit(Domain d, const std::vector<std::string>& bitstrings) {
  std::vector<uint32_t> out;
  for (const auto& s : bitstrings) {
    if (static_cast<int>(s.size()) != d.m)
      throw std::invalid_argument("explicit bitstring length must equal domain size");
    out.push_back(bits_parse(s));
  }
  return ConceptClass(d, std::move(out));
}

}  // namespace mgoig
