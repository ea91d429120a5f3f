#include "blockbeta/hull.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "blockbeta/predicates.hpp"

namespace blockbeta {

namespace {

constexpr int kMaxDim = 8;
constexpr double kMergeDistance = 1e-12;
constexpr double kVisibilityFilter = 1e-9;
constexpr double kContainsTolerance = 1e-9;
constexpr std::uint64_t kInsertionSeed = 0x5eedf00dULL;

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= static_cast<std::uint32_t>(x);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

double dot(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

double distance(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Representative index per input point; near-duplicates map to the smallest index.
std::vector<int> merge_duplicates(const PointCloud& pts, int& merged) {
    const int n = static_cast<int>(pts.count());
    const int d = pts.dim();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        return a < b;
    });
    std::vector<int> rep(n, -1);
    merged = 0;
    for (int oi = 0; oi < n; ++oi) {
        const int i = order[oi];
        if (rep[i] >= 0) continue;
        rep[i] = i;
        for (int oj = oi + 1; oj < n && pts[order[oj]][0] - pts[i][0] <= kMergeDistance; ++oj) {
            const int j = order[oj];
            if (rep[j] < 0 && distance(pts[i], pts[j], d) <= kMergeDistance) {
                rep[j] = i;
                ++merged;
            }
        }
    }
    // Make the representative the smallest index of its class.
    std::vector<int> smallest(n, n);
    for (int i = 0; i < n; ++i) smallest[rep[i]] = std::min(smallest[rep[i]], i);
    for (int i = 0; i < n; ++i) rep[i] = smallest[rep[i]];
    return rep;
}

class IncrementalHull {
public:
    IncrementalHull(const PointCloud& pts, std::vector<int> ids) : pts_(pts), d_(pts.dim()), ids_(std::move(ids)) {}

    void run();
    void export_facets(std::vector<Facet>& out) const;

private:
    struct Face {
        std::array<int, kMaxDim> v{};
        std::array<int, kMaxDim> nb{};
        std::array<double, kMaxDim> n{};
        double off = 0.0;
        std::vector<int> outside;
        bool alive = false;
    };

    const double* P(int local) const { return pts_[ids_[local]]; }
    void initial_simplex(std::array<int, kMaxDim + 1>& s) const;
    void set_plane(Face& f) const;
    bool visible(const Face& f, int q) const;
    int new_face();
    void insert(int p);

    const PointCloud& pts_;
    int d_;
    std::vector<int> ids_;  // local index -> input index
    std::vector<double> interior_;
    std::vector<Face> faces_;
    std::vector<int> free_;
    std::vector<int> assigned_;
    std::vector<int> visible_mark_, tested_mark_;
    int stamp_ = 0;
};

void IncrementalHull::initial_simplex(std::array<int, kMaxDim + 1>& s) const {
    const int n = static_cast<int>(ids_.size());
    const int d = d_;
    int first = 0;
    for (int i = 1; i < n; ++i)
        if (P(i)[0] < P(first)[0]) first = i;
    s[0] = first;
    std::vector<SmallVector> basis;
    double scale = 0.0;
    for (int k = 1; k <= d; ++k) {
        int best = -1;
        double best_r = -1.0;
        for (int i = 0; i < n; ++i) {
            SmallVector r(d);
            for (int c = 0; c < d; ++c) r(c) = P(i)[c] - P(first)[c];
            for (const auto& b : basis) r -= b.dot(r) * b;
            const double rn = r.norm();
            if (rn > best_r) {
                best_r = rn;
                best = i;
            }
        }
        if (k == 1) scale = best_r;
        if (!(best_r > 1e-10 * scale) || best_r == 0.0)
            throw DegenerateInput("convex hull: points do not affinely span R^" + std::to_string(d));
        SmallVector r(d);
        for (int c = 0; c < d; ++c) r(c) = P(best)[c] - P(first)[c];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) r -= b.dot(r) * b;
        basis.push_back(r / r.norm());
        s[k] = best;
    }
}

void IncrementalHull::set_plane(Face& f) const {
    const int d = d_;
    const double* v0 = P(f.v[0]);
    SmallMatrix edges(d, d - 1);
    for (int k = 1; k < d; ++k)
        for (int c = 0; c < d; ++c) edges(c, k - 1) = P(f.v[k])[c] - v0[c];
    SmallVector e = SmallVector::Zero(d);
    e(d - 1) = 1.0;
    const SmallVector normal = edges.householderQr().householderQ() * e;
    double side = 0.0;
    for (int c = 0; c < d; ++c) side += normal(c) * (interior_[c] - v0[c]);
    const double sign = side > 0.0 ? -1.0 : 1.0;
    for (int c = 0; c < d; ++c) f.n[c] = sign * normal(c);
    f.off = dot(f.n.data(), v0, d);
}

bool IncrementalHull::visible(const Face& f, int q) const {
    const double* x = P(q);
    const double dist = dot(f.n.data(), x, d_) - f.off;
    const double tol = kVisibilityFilter * distance(x, P(f.v[0]), d_);
    if (dist > tol) return true;
    if (dist < -tol) return false;
    std::array<const double*, kMaxDim + 1> row{};
    for (int k = 0; k < d_; ++k) row[k] = P(f.v[k]);
    row[d_] = x;
    const int oq = orientation(std::span<const double* const>(row.data(), d_ + 1), d_);
    if (oq == 0) return false;
    row[d_] = interior_.data();
    const int oc = orientation(std::span<const double* const>(row.data(), d_ + 1), d_);
    return oq == -oc;
}

int IncrementalHull::new_face() {
    int id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
    } else {
        id = static_cast<int>(faces_.size());
        faces_.emplace_back();
        visible_mark_.push_back(0);
        tested_mark_.push_back(0);
    }
    faces_[id].alive = true;
    faces_[id].outside.clear();
    return id;
}

void IncrementalHull::run() {
    const int n = static_cast<int>(ids_.size());
    const int d = d_;
    if (n < d + 1) throw DegenerateInput("convex hull: need at least d+1 distinct points");
    std::array<int, kMaxDim + 1> s{};
    initial_simplex(s);
    interior_.assign(d, 0.0);
    for (int k = 0; k <= d; ++k)
        for (int c = 0; c < d; ++c) interior_[c] += P(s[k])[c];
    for (double& c : interior_) c /= d + 1;

    for (int k = 0; k <= d; ++k) {
        const int id = new_face();
        Face& f = faces_[id];
        int pos = 0;
        for (int j = 0; j <= d; ++j) {
            if (j == k) continue;
            f.v[pos] = s[j];
            f.nb[pos] = j;  // facet j omits s[j], so it is across the ridge opposite s[j]
            ++pos;
        }
        set_plane(f);
    }

    assigned_.assign(n, -1);
    std::vector<char> in_simplex(n, 0);
    for (int k = 0; k <= d; ++k) in_simplex[s[k]] = 1;
    for (int q = 0; q < n; ++q) {
        if (in_simplex[q]) continue;
        for (int k = 0; k <= d; ++k)
            if (visible(faces_[k], q)) {
                assigned_[q] = k;
                faces_[k].outside.push_back(q);
                break;
            }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 gen(kInsertionSeed);
    std::shuffle(order.begin(), order.end(), gen);
    for (int p : order)
        if (assigned_[p] >= 0) insert(p);
}

void IncrementalHull::insert(int p) {
    const int d = d_;
    const int start = assigned_[p];
    ++stamp_;
    std::vector<int> vis{start};
    visible_mark_[start] = stamp_;
    struct HorizonRidge {
        int face, pos;
    };
    std::vector<HorizonRidge> horizon;
    for (std::size_t head = 0; head < vis.size(); ++head) {
        const int fi = vis[head];
        for (int k = 0; k < d; ++k) {
            const int g = faces_[fi].nb[k];
            if (visible_mark_[g] == stamp_) continue;
            if (tested_mark_[g] != stamp_) {
                tested_mark_[g] = stamp_;
                if (visible(faces_[g], p)) {
                    visible_mark_[g] = stamp_;
                    vis.push_back(g);
                    continue;
                }
            }
            horizon.push_back({fi, k});
        }
    }

    struct RidgeKey {
        std::array<int, kMaxDim> key;
        int face, pos;
    };
    std::vector<RidgeKey> ridges;
    ridges.reserve(horizon.size() * (d - 1));
    std::vector<int> created;
    created.reserve(horizon.size());
    for (const auto& h : horizon) {
        const int id = new_face();
        const Face& old = faces_[h.face];
        Face& f = faces_[id];
        f.v = old.v;
        f.v[h.pos] = p;
        const int g = old.nb[h.pos];
        f.nb[h.pos] = g;
        Face& across = faces_[g];
        for (int k = 0; k < d; ++k)
            if (across.nb[k] == h.face) {
                across.nb[k] = id;
                break;
            }
        set_plane(f);
        created.push_back(id);
        for (int k = 0; k < d; ++k) {
            if (k == h.pos) continue;
            RidgeKey r{{}, id, k};
            int m = 0;
            for (int j = 0; j < d; ++j)
                if (j != k) r.key[m++] = f.v[j];
            std::sort(r.key.begin(), r.key.begin() + m);
            for (int j = m; j < kMaxDim; ++j) r.key[j] = -1;
            ridges.push_back(r);
        }
    }
    std::sort(ridges.begin(), ridges.end(), [](const RidgeKey& a, const RidgeKey& b) { return a.key < b.key; });
    for (std::size_t i = 0; i + 1 < ridges.size(); i += 2) {
        if (ridges[i].key != ridges[i + 1].key)
            throw std::logic_error("convex hull: unmatched horizon ridge (inconsistent visibility)");
        faces_[ridges[i].face].nb[ridges[i].pos] = ridges[i + 1].face;
        faces_[ridges[i + 1].face].nb[ridges[i + 1].pos] = ridges[i].face;
    }
    if (ridges.size() % 2 != 0) throw std::logic_error("convex hull: odd horizon ridge count");

    std::vector<int> orphans;
    for (int fi : vis) {
        Face& f = faces_[fi];
        for (int q : f.outside)
            if (q != p) orphans.push_back(q);
        f.outside.clear();
        f.outside.shrink_to_fit();
        f.alive = false;
        free_.push_back(fi);
    }
    assigned_[p] = -1;
    for (int q : orphans) {
        assigned_[q] = -1;
        for (int id : created)
            if (visible(faces_[id], q)) {
                assigned_[q] = id;
                faces_[id].outside.push_back(q);
                break;
            }
    }
}

void IncrementalHull::export_facets(std::vector<Facet>& out) const {
    out.clear();
    for (const Face& f : faces_) {
        if (!f.alive) continue;
        Facet facet;
        facet.vertex_ids.resize(d_);
        for (int k = 0; k < d_; ++k) facet.vertex_ids[k] = ids_[f.v[k]];
        std::sort(facet.vertex_ids.begin(), facet.vertex_ids.end());
        facet.normal.assign(f.n.begin(), f.n.begin() + d_);
        facet.offset = f.off;
        out.push_back(std::move(facet));
    }
    std::sort(out.begin(), out.end(),
              [](const Facet& a, const Facet& b) { return a.vertex_ids < b.vertex_ids; });
}

void hull_1d(const PointCloud& pts, const std::vector<int>& ids, std::vector<Facet>& out) {
    int lo = ids[0], hi = ids[0];
    for (int i : ids) {
        if (pts[i][0] < pts[lo][0]) lo = i;
        if (pts[i][0] > pts[hi][0]) hi = i;
    }
    if (!(pts[hi][0] > pts[lo][0])) throw DegenerateInput("convex hull: points do not affinely span R^1");
    out = {Facet{{lo}, {-1.0}, -pts[lo][0]}, Facet{{hi}, {1.0}, pts[hi][0]}};
    if (hi < lo) std::swap(out[0], out[1]);
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int d) {
    double f = 1.0;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

template <typename Fn>
void for_each_subset(const std::vector<int>& items, int size, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (size > n || size < 0) return;
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> sub(size);
    for (;;) {
        for (int i = 0; i < size; ++i) sub[i] = items[idx[i]];
        fn(sub);
        int i = size - 1;
        while (i >= 0 && idx[i] == n - size + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

PointCloud::PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim < 1) throw std::invalid_argument("point cloud dimension must be >= 1");
    if (coords_.size() % dim != 0) throw std::invalid_argument("point cloud: coordinate count not a multiple of dim");
}

PointCloud::PointCloud(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("point cloud: no points");
    dim_ = static_cast<int>(rows.front().size());
    if (dim_ < 1) throw std::invalid_argument("point cloud dimension must be >= 1");
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != dim_) throw std::invalid_argument("point cloud: ragged rows");
        coords_.insert(coords_.end(), r.begin(), r.end());
    }
}

HullResult convex_hull(const PointCloud& points) {
    const int d = points.dim();
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("convex hull: dimension must be in [1, 8]");
    for (double c : points.coords())
        if (!std::isfinite(c)) throw std::invalid_argument("convex hull: non-finite coordinate");
    HullResult out;
    out.points = points;
    if (points.count() < static_cast<std::size_t>(d + 1))
        throw DegenerateInput("convex hull: need at least d+1 points");
    const auto rep = merge_duplicates(points, out.duplicates_merged);
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(rep.size()); ++i)
        if (rep[i] == i) ids.push_back(i);

    if (d == 1) {
        hull_1d(points, ids, out.facets);
    } else {
        IncrementalHull h(points, std::move(ids));
        h.run();
        h.export_facets(out.facets);
    }
    std::vector<int> verts;
    for (const auto& f : out.facets) verts.insert(verts.end(), f.vertex_ids.begin(), f.vertex_ids.end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    out.vertex_ids = std::move(verts);
    out.f_vector = f_vector(out);
    out.volume = volume(out);
    return out;
}

std::set<std::vector<int>> brute_force_facets(const PointCloud& points) {
    const int n = static_cast<int>(points.count());
    const int d = points.dim();
    if (n > 25) throw std::invalid_argument("brute_force_facets: at most 25 points");
    std::set<std::vector<int>> out;
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<const double*> row(d + 1);
    for_each_subset(all, d, [&](const std::vector<int>& sub) {
        for (int k = 0; k < d; ++k) row[k] = points[sub[k]];
        int side = 0;
        std::size_t next = 0;
        for (int q = 0; q < n; ++q) {
            if (next < sub.size() && sub[next] == q) {
                ++next;
                continue;
            }
            row[d] = points[q];
            const int o = orientation(row, d);
            if (o == 0 || (side != 0 && o != side)) return;
            side = o;
        }
        if (side != 0) out.insert(sub);
    });
    return out;
}

std::vector<std::int64_t> f_vector(const HullResult& hull) {
    const int d = hull.dim();
    std::vector<std::int64_t> f(d, 0);
    if (d == 0) return f;
    std::unordered_set<int> verts;
    for (const auto& facet : hull.facets) verts.insert(facet.vertex_ids.begin(), facet.vertex_ids.end());
    f[0] = static_cast<std::int64_t>(verts.size());
    f[d - 1] = static_cast<std::int64_t>(hull.facets.size());
    for (int j = 1; j < d - 1; ++j) {
        std::unordered_set<std::vector<int>, VectorHash> faces;
        for (const auto& facet : hull.facets)
            for_each_subset(facet.vertex_ids, j + 1, [&](const std::vector<int>& s) { faces.insert(s); });
        f[j] = static_cast<std::int64_t>(faces.size());
    }
    return f;
}

double volume(const HullResult& hull) {
    const int d = hull.dim();
    if (hull.facets.empty()) return 0.0;
    std::vector<double> centroid(d, 0.0);
    std::unordered_set<int> verts;
    for (const auto& facet : hull.facets) verts.insert(facet.vertex_ids.begin(), facet.vertex_ids.end());
    for (int v : verts)
        for (int c = 0; c < d; ++c) centroid[c] += hull.points[v][c];
    for (double& c : centroid) c /= static_cast<double>(verts.size());
    double total = 0.0;
    SmallMatrix m(d, d);
    for (const auto& facet : hull.facets) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m(r, c) = hull.points[facet.vertex_ids[r]][c] - centroid[c];
        total += std::abs(m.partialPivLu().determinant());
    }
    return total / factorial(d);
}

bool contains_point(const HullResult& hull, std::span<const double> x) {
    const int d = hull.dim();
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("contains_point: wrong dimension");
    for (const auto& f : hull.facets)
        if (dot(f.normal.data(), x.data(), d) > f.offset + kContainsTolerance) return false;
    return true;
}

bool euler_relation_holds(const std::vector<std::int64_t>& f, int d) {
    std::int64_t sum = 0;
    for (int j = 0; j < static_cast<int>(f.size()); ++j) sum += (j % 2 == 0 ? 1 : -1) * f[j];
    return sum == (d % 2 == 0 ? 0 : 2);
}

bool ridges_regular(const HullResult& hull) {
    const int d = hull.dim();
    std::vector<std::vector<int>> ridges;
    ridges.reserve(hull.facets.size() * d);
    for (const auto& facet : hull.facets)
        for_each_subset(facet.vertex_ids, d - 1, [&](const std::vector<int>& s) { ridges.push_back(s); });
    std::sort(ridges.begin(), ridges.end());
    for (std::size_t i = 0; i < ridges.size();) {
        std::size_t j = i;
        while (j < ridges.size() && ridges[j] == ridges[i]) ++j;
        if (j - i != 2) return false;
        i = j;
    }
    return true;
}

double hinman_rho(int d, int j) {
    return 0.5 * static_cast<double>(binomial((d + 1) / 2, d - j - 1) + binomial(d / 2, d - j - 1));
}

bool hinman_holds(const std::vector<std::int64_t>& f, int d) {
    const std::int64_t facets = f.at(d - 1);
    for (int j = std::max(0, d / 2 - 1); j < d; ++j) {
        const std::int64_t twice_rho = binomial((d + 1) / 2, d - j - 1) + binomial(d / 2, d - j - 1);
        if (2 * f[j] < twice_rho * facets) return false;
    }
    return true;
}

std::set<std::vector<int>> facet_set(const HullResult& hull) {
    std::set<std::vector<int>> out;
    for (const auto& f : hull.facets) out.insert(f.vertex_ids);
    return out;
}

PointCloud read_point_cloud(std::istream& in) {
    std::vector<double> coords;
    int dim = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        int count = 0;
        double x;
        while (ls >> x) {
            coords.push_back(x);
            ++count;
        }
        if (!ls.eof()) throw std::invalid_argument("point cloud: bad number on line " + std::to_string(lineno));
        if (count == 0) continue;
        if (dim == 0) dim = count;
        if (count != dim) throw std::invalid_argument("point cloud: inconsistent column count on line " +
                                                      std::to_string(lineno));
    }
    if (dim == 0) throw std::invalid_argument("point cloud: no points");
    return PointCloud(dim, std::move(coords));
}

void write_facets(std::ostream& out, const HullResult& hull) {
    for (const auto& f : hull.facets) {
        for (std::size_t k = 0; k < f.vertex_ids.size(); ++k) out << (k ? " " : "") << f.vertex_ids[k];
        out << '\n';
    }
}

}  // namespace blockbeta
