#include <lochodge/mesh.hpp>
#include <lochodge/reference_spaces.hpp>

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lochodge {

std::string_view kind_name(MeshKind k) { return k == MeshKind::simplicial ? "simplicial" : "cubical"; }

std::optional<MeshKind> parse_kind(std::string_view s) {
  if (s == "simplicial") return MeshKind::simplicial;
  if (s == "cubical") return MeshKind::cubical;
  return std::nullopt;
}

std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::unit_interval: return "unit_interval";
    case Domain::unit_square: return "unit_square";
    case Domain::unit_cube: return "unit_cube";
    case Domain::square_with_hole: return "square_with_hole";
  }
  return "?";
}

std::optional<Domain> parse_domain(std::string_view s) {
  for (auto d : {Domain::unit_interval, Domain::unit_square, Domain::unit_cube, Domain::square_with_hole})
    if (domain_name(d) == s) return d;
  return std::nullopt;
}

int domain_dimension(Domain d) {
  switch (d) {
    case Domain::unit_interval: return 1;
    case Domain::unit_cube: return 3;
    default: return 2;
  }
}

int permutation_parity(std::span<const int> seq) {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

namespace {

double signed_simplex_volume(int n, const std::vector<double>& coords, const std::vector<int>& cell) {
  Eigen::MatrixXd J(n, n);
  const auto base = static_cast<std::size_t>(cell[0]) * static_cast<std::size_t>(n);
  for (int j = 0; j < n; ++j) {
    const auto vj = static_cast<std::size_t>(cell[static_cast<std::size_t>(j + 1)]) * static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i) J(i, j) = coords[vj + static_cast<std::size_t>(i)] - coords[base + static_cast<std::size_t>(i)];
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return J.determinant() / fact;
}

}  // namespace

MeshComplex::MeshComplex(MeshKind kind, int n, std::vector<double> coords, std::vector<std::vector<int>> cells)
    : kind_(kind), n_(n), coords_(std::move(coords)), cells_(std::move(cells)) {
  if (n < 1 || n > kMaxPolyVars) throw std::invalid_argument("MeshComplex: dimension must be 1..4");
  if (coords_.size() % static_cast<std::size_t>(n) != 0) throw std::invalid_argument("MeshComplex: coordinate array length");
  const int nv = num_vertices();
  const std::size_t per_cell = kind == MeshKind::simplicial ? static_cast<std::size_t>(n + 1) : (std::size_t{1} << n);
  refine_order_ = cells_;
  volumes_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cell = cells_[c];
    if (cell.size() != per_cell) throw std::invalid_argument("MeshComplex: cell " + std::to_string(c) + " has the wrong vertex count");
    for (int v : cell)
      if (v < 0 || v >= nv) throw std::invalid_argument("MeshComplex: cell " + std::to_string(c) + " references a missing vertex");
    if (kind == MeshKind::simplicial) {
      double vol = signed_simplex_volume(n, coords_, cell);
      if (!(std::abs(vol) > 1e-14)) throw std::invalid_argument("MeshComplex: degenerate simplex " + std::to_string(c));
      if (vol < 0) {
        std::swap(cell[0], cell[1]);
        vol = -vol;
      }
      volumes_[c] = vol;
    } else {
      std::vector<double> lo(static_cast<std::size_t>(n), 1e300), hi(static_cast<std::size_t>(n), -1e300);
      for (int v : cell)
        for (int a = 0; a < n; ++a) {
          const double x = vertex(v)[static_cast<std::size_t>(a)];
          lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], x);
          hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], x);
        }
      double vol = 1.0;
      for (int a = 0; a < n; ++a) vol *= hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
      if (!(vol > 1e-14)) throw std::invalid_argument("MeshComplex: degenerate box " + std::to_string(c));
      std::vector<int> ordered(per_cell, -1);
      for (int v : cell) {
        std::size_t bits = 0;
        for (int a = 0; a < n; ++a) {
          const double x = vertex(v)[static_cast<std::size_t>(a)];
          const double tol = 1e-12 * (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]);
          if (std::abs(x - hi[static_cast<std::size_t>(a)]) <= tol)
            bits |= std::size_t{1} << a;
          else if (std::abs(x - lo[static_cast<std::size_t>(a)]) > tol)
            throw std::invalid_argument("MeshComplex: box " + std::to_string(c) + " is not axis aligned");
        }
        if (ordered[bits] != -1) throw std::invalid_argument("MeshComplex: box " + std::to_string(c) + " repeats a corner");
        ordered[bits] = v;
      }
      cell = std::move(ordered);
      volumes_[c] = vol;
    }
  }
  build();
}

void MeshComplex::build() {
  const auto cell = cell_type();
  vertex_cells_.assign(static_cast<std::size_t>(num_vertices()), {});
  for (int c = 0; c < num_cells(); ++c)
    for (int v : cells_[static_cast<std::size_t>(c)]) vertex_cells_[static_cast<std::size_t>(v)].push_back(c);

  faces_.assign(static_cast<std::size_t>(n_ + 1), {});
  face_index_.assign(static_cast<std::size_t>(n_ + 1), {});
  cell_faces_.assign(static_cast<std::size_t>(n_ + 1), {});
  local_faces_.assign(static_cast<std::size_t>(n_ + 1), 0);
  for (int j = 0; j <= n_; ++j) {
    const auto& ref = reference_faces(cell, n_, j);
    local_faces_[static_cast<std::size_t>(j)] = static_cast<int>(ref.size());
    auto& index = face_index_[static_cast<std::size_t>(j)];
    std::vector<std::vector<int>> keys;
    keys.reserve(cells_.size() * ref.size());
    for (const auto& cv : cells_)
      for (const auto& f : ref) {
        std::vector<int> key;
        key.reserve(f.vertices.size());
        for (int lv : f.vertices) key.push_back(cv[static_cast<std::size_t>(lv)]);
        std::sort(key.begin(), key.end());
        keys.push_back(std::move(key));
      }
    for (const auto& key : keys) index.emplace(key, 0);
    auto& list = faces_[static_cast<std::size_t>(j)];
    list.reserve(index.size());
    for (auto& [key, id] : index) {
      id = static_cast<int>(list.size());
      list.push_back(key);
    }
    auto& cf = cell_faces_[static_cast<std::size_t>(j)];
    cf.reserve(keys.size());
    for (const auto& key : keys) cf.push_back(index.at(key));
  }

  h_ = 0.0;
  for (int c = 0; c < num_cells(); ++c) h_ = std::max(h_, cell_diameter(c));
}

std::optional<int> MeshComplex::find_face(int j, std::vector<int> vertices) const {
  if (j < 0 || j > n_) return std::nullopt;
  std::sort(vertices.begin(), vertices.end());
  const auto& index = face_index_[static_cast<std::size_t>(j)];
  auto it = index.find(vertices);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::span<const int> MeshComplex::cell_faces(int c, int j) const {
  const auto count = static_cast<std::size_t>(local_faces_[static_cast<std::size_t>(j)]);
  return {cell_faces_[static_cast<std::size_t>(j)].data() + static_cast<std::size_t>(c) * count, count};
}

std::vector<int> MeshComplex::macroelement(int j, int face) const {
  if (j < 0 || j > n_ || face < 0 || face >= num_faces(j)) throw std::invalid_argument("macroelement: unknown face");
  const auto& fv = face_vertices(j, face);
  std::vector<int> out;
  for (int c : vertex_cells(fv[0])) {
    const auto& cv = cells_[static_cast<std::size_t>(c)];
    bool all = true;
    for (int v : fv)
      if (std::find(cv.begin(), cv.end(), v) == cv.end()) {
        all = false;
        break;
      }
    if (all) out.push_back(c);
  }
  return out;
}

double MeshComplex::cell_diameter(int c) const {
  const auto& cv = cells_[static_cast<std::size_t>(c)];
  double d = 0.0;
  for (std::size_t a = 0; a < cv.size(); ++a)
    for (std::size_t b = a + 1; b < cv.size(); ++b) {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double t = vertex(cv[a])[static_cast<std::size_t>(i)] - vertex(cv[b])[static_cast<std::size_t>(i)];
        s += t * t;
      }
      d = std::max(d, std::sqrt(s));
    }
  return d;
}

void MeshComplex::cell_map(int c, std::vector<double>& origin, std::vector<double>& jacobian) const {
  const auto& cv = cells_[static_cast<std::size_t>(c)];
  const auto n = static_cast<std::size_t>(n_);
  origin.assign(vertex(cv[0]).begin(), vertex(cv[0]).end());
  jacobian.assign(n * n, 0.0);
  if (kind_ == MeshKind::simplicial) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) jacobian[i * n + j] = vertex(cv[j + 1])[i] - origin[i];
  } else {
    for (std::size_t a = 0; a < n; ++a) jacobian[a * n + a] = vertex(cv[std::size_t{1} << a])[a] - origin[a];
  }
}

std::vector<IncidenceEntry> MeshComplex::boundary(int j) const {
  if (j < 1 || j > n_) throw std::invalid_argument("boundary: need 1 <= j <= n");
  std::vector<IncidenceEntry> out;
  std::vector<int> cell_of_top;
  int top_sign = 1;
  if (j == n_) {
    cell_of_top.assign(static_cast<std::size_t>(num_faces(n_)), -1);
    for (int c = 0; c < num_cells(); ++c) cell_of_top[static_cast<std::size_t>(cell_faces(c, n_)[0])] = c;
  }
  for (int f = 0; f < num_faces(j); ++f) {
    const auto& fv = face_vertices(j, f);
    if (j == n_ && kind_ == MeshKind::simplicial)
      top_sign = permutation_parity(cells_[static_cast<std::size_t>(cell_of_top[static_cast<std::size_t>(f)])]);
    if (kind_ == MeshKind::simplicial) {
      for (std::size_t i = 0; i < fv.size(); ++i) {
        std::vector<int> sub;
        for (std::size_t m = 0; m < fv.size(); ++m)
          if (m != i) sub.push_back(fv[m]);
        out.push_back({*find_face(j - 1, sub), f, top_sign * (i % 2 == 0 ? 1 : -1)});
      }
    } else {
      // Free axes of the face, ascending; lower and upper sub-faces along each.
      std::vector<int> axes;
      for (int a = 0; a < n_; ++a) {
        const double x0 = vertex(fv[0])[static_cast<std::size_t>(a)];
        for (int v : fv)
          if (vertex(v)[static_cast<std::size_t>(a)] != x0) {
            axes.push_back(a);
            break;
          }
      }
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto a = static_cast<std::size_t>(axes[i]);
        double lo = 1e300, hi = -1e300;
        for (int v : fv) {
          lo = std::min(lo, vertex(v)[a]);
          hi = std::max(hi, vertex(v)[a]);
        }
        std::vector<int> lower, upper;
        for (int v : fv) (vertex(v)[a] == hi ? upper : lower).push_back(v);
        const int s = i % 2 == 0 ? 1 : -1;
        out.push_back({*find_face(j - 1, upper), f, s});
        out.push_back({*find_face(j - 1, lower), f, -s});
      }
    }
  }
  return out;
}

std::vector<int> MeshComplex::boundary_facets() const {
  std::vector<int> count(static_cast<std::size_t>(num_faces(n_ - 1)), 0);
  for (int c = 0; c < num_cells(); ++c)
    for (int f : cell_faces(c, n_ - 1)) ++count[static_cast<std::size_t>(f)];
  std::vector<int> out;
  for (std::size_t f = 0; f < count.size(); ++f)
    if (count[f] == 1) out.push_back(static_cast<int>(f));
  return out;
}

long MeshComplex::euler_characteristic() const {
  long chi = 0;
  for (int j = 0; j <= n_; ++j) chi += (j % 2 == 0 ? 1 : -1) * static_cast<long>(num_faces(j));
  return chi;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

// Components of a family of vertex sets, joined when they share a vertex.
int count_components(int num_vertices, const std::vector<const std::vector<int>*>& sets) {
  std::vector<int> parent(static_cast<std::size_t>(num_vertices));
  for (int v = 0; v < num_vertices; ++v) parent[static_cast<std::size_t>(v)] = v;
  std::vector<char> used(static_cast<std::size_t>(num_vertices), 0);
  for (const auto* s : sets) {
    for (int v : *s) used[static_cast<std::size_t>(v)] = 1;
    for (std::size_t i = 1; i < s->size(); ++i) {
      const int a = find_root(parent, (*s)[0]);
      const int b = find_root(parent, (*s)[i]);
      if (a != b) parent[static_cast<std::size_t>(b)] = a;
    }
  }
  int count = 0;
  for (int v = 0; v < num_vertices; ++v)
    if (used[static_cast<std::size_t>(v)] && find_root(parent, v) == v) ++count;
  return count;
}

}  // namespace

std::vector<long> MeshComplex::betti_numbers() const {
  if (n_ < 1 || n_ > 3) throw std::invalid_argument("betti_numbers: needs 1 <= n <= 3");
  std::vector<long> b(static_cast<std::size_t>(n_ + 1), 0);
  std::vector<const std::vector<int>*> cells;
  for (const auto& c : cells_) cells.push_back(&c);
  b[0] = count_components(num_vertices(), cells);
  if (n_ == 1) return b;
  // Alexander duality: b_{n-1} counts the bounded components of the complement,
  // one per boundary component beyond the outer boundary of each component.
  std::vector<const std::vector<int>*> facets;
  for (int f : boundary_facets()) facets.push_back(&face_vertices(n_ - 1, f));
  b[static_cast<std::size_t>(n_ - 1)] = count_components(num_vertices(), facets) - b[0];
  if (n_ == 3) b[1] = b[0] + b[2] - euler_characteristic();
  return b;
}

const std::vector<int>& MeshComplex::refinement_order(int c) const { return refine_order_[static_cast<std::size_t>(c)]; }

namespace {

class VertexBuilder {
 public:
  VertexBuilder(int n, std::vector<double> coords) : n_(n), coords_(std::move(coords)) {}

  /// Vertex at the barycentre of the given vertices, created once per vertex set.
  int centre(std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    if (ids.size() == 1) return ids[0];
    auto [it, inserted] = made_.emplace(ids, 0);
    if (!inserted) return it->second;
    const auto n = static_cast<std::size_t>(n_);
    std::vector<double> x(n, 0.0);
    for (int v : ids)
      for (std::size_t i = 0; i < n; ++i) x[i] += coords_[static_cast<std::size_t>(v) * n + i];
    for (auto& xi : x) xi /= static_cast<double>(ids.size());
    it->second = static_cast<int>(coords_.size() / n);
    coords_.insert(coords_.end(), x.begin(), x.end());
    return it->second;
  }

  std::vector<double> take() { return std::move(coords_); }

 private:
  int n_;
  std::vector<double> coords_;
  std::map<std::vector<int>, int> made_;
};

}  // namespace

MeshComplex refine(const MeshComplex& mesh) {
  const int n = mesh.dim();
  VertexBuilder vb(n, mesh.coordinates());
  std::vector<std::vector<int>> cells;
  if (mesh.kind() == MeshKind::cubical) {
    int pts = 1;
    for (int a = 0; a < n; ++a) pts *= 3;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& cv = mesh.cell_vertices(c);
      std::vector<int> grid(static_cast<std::size_t>(pts));
      for (int t = 0; t < pts; ++t) {
        // Digit 0/2: lower/upper end of the axis, digit 1: free (face centre).
        std::vector<int> corners{0};
        int rest = t;
        for (int a = 0; a < n; ++a) {
          const int digit = rest % 3;
          rest /= 3;
          std::vector<int> next;
          for (int b : corners) {
            if (digit == 0 || digit == 1) next.push_back(b);
            if (digit == 2 || digit == 1) next.push_back(b | (1 << a));
          }
          corners = std::move(next);
        }
        std::vector<int> ids;
        for (int b : corners) ids.push_back(cv[static_cast<std::size_t>(b)]);
        grid[static_cast<std::size_t>(t)] = vb.centre(ids);
      }
      for (int child = 0; child < (1 << n); ++child) {
        std::vector<int> cell;
        for (int b = 0; b < (1 << n); ++b) {
          int t = 0, scale = 1;
          for (int a = 0; a < n; ++a) {
            t += (((child >> a) & 1) + ((b >> a) & 1)) * scale;
            scale *= 3;
          }
          cell.push_back(grid[static_cast<std::size_t>(t)]);
        }
        cells.push_back(std::move(cell));
      }
    }
  } else {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto& o = mesh.refinement_order(c);
      auto mid = [&](int i, int j) { return vb.centre({o[static_cast<std::size_t>(i)], o[static_cast<std::size_t>(j)]}); };
      if (n == 1) {
        const int m = mid(0, 1);
        cells.push_back({o[0], m});
        cells.push_back({m, o[1]});
      } else if (n == 2) {
        const int m01 = mid(0, 1), m02 = mid(0, 2), m12 = mid(1, 2);
        cells.push_back({o[0], m01, m02});
        cells.push_back({m01, o[1], m12});
        cells.push_back({m02, m12, o[2]});
        cells.push_back({m01, m12, m02});
      } else if (n == 3) {
        const int x0 = o[0], x1 = o[1], x2 = o[2], x3 = o[3];
        const int x01 = mid(0, 1), x02 = mid(0, 2), x03 = mid(0, 3), x12 = mid(1, 2), x13 = mid(1, 3), x23 = mid(2, 3);
        cells.push_back({x0, x01, x02, x03});
        cells.push_back({x01, x1, x12, x13});
        cells.push_back({x02, x12, x2, x23});
        cells.push_back({x03, x13, x23, x3});
        cells.push_back({x01, x02, x03, x13});
        cells.push_back({x01, x02, x12, x13});
        cells.push_back({x02, x03, x13, x23});
        cells.push_back({x02, x12, x13, x23});
      } else {
        throw std::invalid_argument("refine: simplicial refinement implemented for n <= 3");
      }
    }
  }
  return MeshComplex(mesh.kind(), n, vb.take(), std::move(cells));
}

namespace {

MeshComplex level_zero(Domain domain, MeshKind kind) {
  const bool simp = kind == MeshKind::simplicial;
  switch (domain) {
    case Domain::unit_interval: return MeshComplex(kind, 1, {0.0, 1.0}, {{0, 1}});
    case Domain::unit_square:
      if (simp) return MeshComplex(kind, 2, {0, 0, 1, 0, 0, 1, 1, 1}, {{0, 1, 3}, {0, 3, 2}});
      return MeshComplex(kind, 2, {0, 0, 1, 0, 0, 1, 1, 1}, {{0, 1, 2, 3}});
    case Domain::unit_cube: {
      std::vector<double> coords;
      for (int v = 0; v < 8; ++v)
        for (int a = 0; a < 3; ++a) coords.push_back((v >> a) & 1);
      if (!simp) return MeshComplex(kind, 3, coords, {{0, 1, 2, 3, 4, 5, 6, 7}});
      // Kuhn: one tetrahedron per monotone path 0 -> 7 along the axes.
      std::vector<std::vector<int>> cells;
      std::array<int, 3> perm{0, 1, 2};
      do {
        const int a = 1 << perm[0];
        const int b = a | (1 << perm[1]);
        cells.push_back({0, a, b, 7});
      } while (std::next_permutation(perm.begin(), perm.end()));
      return MeshComplex(kind, 3, coords, cells);
    }
    case Domain::square_with_hole: {
      std::vector<double> coords;
      for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
          coords.push_back(i);
          coords.push_back(j);
        }
      std::vector<std::vector<int>> cells;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          if (i == 1 && j == 1) continue;
          const int a = j * 4 + i, b = a + 1, c = a + 4, d = a + 5;
          if (simp) {
            cells.push_back({a, b, d});
            cells.push_back({a, d, c});
          } else {
            cells.push_back({a, b, c, d});
          }
        }
      return MeshComplex(kind, 2, coords, cells);
    }
  }
  throw std::invalid_argument("build_grid: unknown domain");
}

}  // namespace

MeshComplex build_grid(Domain domain, MeshKind kind, int level) {
  if (level < 0) throw std::invalid_argument("build_grid: level must be non-negative");
  MeshComplex m = level_zero(domain, kind);
  for (int l = 0; l < level; ++l) m = refine(m);
  return m;
}

MeshComplex mesh_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  const int n = doc.at("n").get<int>();
  const auto kind = parse_kind(doc.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("mesh json: kind must be \"simplicial\" or \"cubical\"");
  std::vector<double> coords;
  for (const auto& v : doc.at("vertices")) {
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("mesh json: vertex with wrong dimension");
    for (const auto& x : v) coords.push_back(x.get<double>());
  }
  std::vector<std::vector<int>> cells;
  for (const auto& c : doc.at("cells")) cells.push_back(c.get<std::vector<int>>());
  return MeshComplex(*kind, n, std::move(coords), std::move(cells));
}

std::string mesh_to_json(const MeshComplex& mesh) {
  nlohmann::json doc;
  doc["n"] = mesh.dim();
  doc["kind"] = std::string(kind_name(mesh.kind()));
  auto verts = nlohmann::json::array();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto x = mesh.vertex(v);
    verts.push_back(std::vector<double>(x.begin(), x.end()));
  }
  doc["vertices"] = std::move(verts);
  auto cells = nlohmann::json::array();
  for (int c = 0; c < mesh.num_cells(); ++c) cells.push_back(mesh.cell_vertices(c));
  doc["cells"] = std::move(cells);
  return doc.dump();
}

Barycentric barycentric(const MeshComplex& mesh, int c, std::span<const double> x) {
  if (mesh.kind() != MeshKind::simplicial) throw std::invalid_argument("barycentric: simplicial cells only");
  const int n = mesh.dim();
  std::vector<double> origin, jac;
  mesh.cell_map(c, origin, jac);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> J(jac.data(), n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
  if (!lu.isInvertible()) throw std::invalid_argument("barycentric: degenerate cell");
  const Eigen::MatrixXd Jinv = lu.inverse();
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r(i) = x[static_cast<std::size_t>(i)] - origin[static_cast<std::size_t>(i)];
  const Eigen::VectorXd s = Jinv * r;
  Barycentric b;
  b.lambda.assign(static_cast<std::size_t>(n + 1), 0.0);
  b.lambda[0] = 1.0 - s.sum();
  for (int i = 0; i < n; ++i) b.lambda[static_cast<std::size_t>(i + 1)] = s(i);
  AltForm<double> d0(n, 1);
  for (int i = 0; i < n; ++i) {
    AltForm<double> di(n, 1);
    for (int m = 0; m < n; ++m) {
      di[static_cast<std::size_t>(m)] = Jinv(i, m);
      d0[static_cast<std::size_t>(m)] -= Jinv(i, m);
    }
    b.dlambda.push_back(di);
  }
  b.dlambda.insert(b.dlambda.begin(), d0);
  return b;
}

}  // namespace lochodge
