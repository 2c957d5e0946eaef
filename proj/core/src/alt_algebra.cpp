#include <lochodge/alt_algebra.hpp>

#include <algorithm>
#include <array>

namespace lochodge {

namespace {

struct AltTables {
  // masks[n][k]: lexicographically ordered masks of popcount k in n bits.
  std::array<std::array<std::vector<std::uint32_t>, kMaxAltDim + 1>, kMaxAltDim + 1> masks;
  // rank[n][mask]
  std::array<std::vector<int>, kMaxAltDim + 1> rank;

  AltTables() {
    for (int n = 0; n <= kMaxAltDim; ++n) {
      rank[n].assign(std::size_t{1} << n, -1);
      for (int k = 0; k <= n; ++k) {
        std::vector<std::vector<int>> seqs;
        for (std::uint32_t m = 0; m < (1U << n); ++m) {
          if (popcount(m) != k) continue;
          std::vector<int> e;
          for (int i = 0; i < n; ++i)
            if ((m >> i) & 1U) e.push_back(i);
          seqs.push_back(std::move(e));
        }
        std::sort(seqs.begin(), seqs.end());
        auto& out = masks[n][k];
        for (const auto& e : seqs) {
          std::uint32_t m = 0;
          for (int i : e) m |= 1U << i;
          rank[n][m] = static_cast<int>(out.size());
          out.push_back(m);
        }
      }
    }
  }
};

const AltTables& tables() {
  static const AltTables t;
  return t;
}

}  // namespace

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

AltIndex::AltIndex(int n, std::uint32_t mask) : n_(n), mask_(mask) {
  if (n < 0 || n > kMaxAltDim) throw std::invalid_argument("AltIndex: n out of range");
  if (n < 32 && (mask >> n) != 0U) throw std::invalid_argument("AltIndex: entry exceeds n");
}

AltIndex AltIndex::from_entries(int n, std::span<const int> entries) {
  std::uint32_t mask = 0;
  int prev = 0;
  for (int e : entries) {
    if (e <= prev || e > n) throw std::invalid_argument("AltIndex: entries must be strictly increasing in [1, n]");
    mask |= 1U << (e - 1);
    prev = e;
  }
  return AltIndex(n, mask);
}

std::vector<int> AltIndex::entries() const {
  std::vector<int> e;
  for (int i = 0; i < n_; ++i)
    if ((mask_ >> i) & 1U) e.push_back(i + 1);
  return e;
}

AltIndex AltIndex::complement() const {
  const std::uint32_t full = n_ == 0 ? 0U : ((1U << n_) - 1U);
  return AltIndex(n_, full & ~mask_);
}

int AltIndex::rank() const { return alt_rank(n_, mask_); }

std::vector<AltIndex> alt_index_set(int n, int k) {
  if (n < 0 || n > kMaxAltDim || k < 0 || k > n) throw std::invalid_argument("alt_index_set: need 0 <= k <= n <= 8");
  std::vector<AltIndex> out;
  for (auto m : tables().masks[n][k]) out.emplace_back(n, m);
  return out;
}

const std::vector<std::uint32_t>& alt_masks(int n, int k) {
  if (n < 0 || n > kMaxAltDim || k < 0 || k > n) throw std::invalid_argument("alt_masks: need 0 <= k <= n <= 8");
  return tables().masks[n][k];
}

int alt_rank(int n, std::uint32_t mask) { return tables().rank[n][mask]; }

int merge_sign(std::uint32_t a, std::uint32_t b) {
  // Count pairs (i in a, j in b) with i > j.
  int inversions = 0;
  for (std::uint32_t bb = b; bb != 0U; bb &= bb - 1U) {
    const int j = __builtin_ctz(bb);
    inversions += popcount(a >> (j + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace lochodge
