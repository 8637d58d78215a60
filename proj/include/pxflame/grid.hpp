/// @file grid.hpp
/// @brief Uniform rectangular grids (1D/2D), nodal scalar fields, staggered
///        face vector fields, and the gradient/divergence stencil pair.
///
/// The divergence is built as the exact negative adjoint of the face
/// gradient under the trapezoidal node weights and the face quadrature
/// weights, so <div F, phi> = -<F, grad phi> holds to machine precision
/// for phi vanishing on the boundary.

#ifndef PXFLAME_GRID_HPP
#define PXFLAME_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pxflame {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Uniform rectangular lattice in dimension 1 or 2.  Nodes are indexed
/// row-major: id = i + nx*j.  Extents are (counts-1)*spacing per axis.
class Grid {
public:
    static Grid line(int nx, double length, double origin = 0.0)
    {
        return Grid(1, {nx, 1}, {length, 0.0}, {origin, 0.0});
    }

    static Grid rectangle(int nx, int ny, double lx, double ly,
                          double ox = 0.0, double oy = 0.0)
    {
        return Grid(2, {nx, ny}, {lx, ly}, {ox, oy});
    }

    int dim() const { return dim_; }
    int count(int axis) const { return counts_[axis]; }
    double extent(int axis) const { return extents_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    double origin(int axis) const { return origin_[axis]; }
    /// Largest spacing over axes, the "h" used in refinement statements.
    double spacing_max() const { return dim_ == 1 ? h_[0] : std::max(h_[0], h_[1]); }

    std::size_t node_count() const
    {
        return static_cast<std::size_t>(counts_[0]) * counts_[1];
    }

    std::size_t node_id(int i, int j = 0) const
    {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(counts_[0]) * j;
    }

    int node_i(std::size_t id) const { return static_cast<int>(id % counts_[0]); }
    int node_j(std::size_t id) const { return static_cast<int>(id / counts_[0]); }

    Vec2 node_pos(std::size_t id) const
    {
        return {origin_[0] + h_[0] * node_i(id), origin_[1] + h_[1] * node_j(id)};
    }

    bool is_boundary_node(std::size_t id) const
    {
        const int i = node_i(id), j = node_j(id);
        if (i == 0 || i == counts_[0] - 1) return true;
        if (dim_ == 2 && (j == 0 || j == counts_[1] - 1)) return true;
        return false;
    }

    /// Trapezoidal quadrature weight of a node (cell volume share).
    double node_volume(std::size_t id) const
    {
        const int i = node_i(id), j = node_j(id);
        double v = h_[0] * ((i == 0 || i == counts_[0] - 1) ? 0.5 : 1.0);
        if (dim_ == 2)
            v *= h_[1] * ((j == 0 || j == counts_[1] - 1) ? 0.5 : 1.0);
        return v;
    }

    // cells (quadrature boxes between nodes)
    int cell_count(int axis) const { return counts_[axis] - 1; }
    std::size_t cell_total() const
    {
        std::size_t n = cell_count(0);
        if (dim_ == 2) n *= cell_count(1);
        return n;
    }
    std::size_t cell_id(int i, int j = 0) const
    {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(cell_count(0)) * j;
    }
    int cell_i(std::size_t c) const { return static_cast<int>(c % cell_count(0)); }
    int cell_j(std::size_t c) const { return static_cast<int>(c / cell_count(0)); }
    Vec2 cell_center(std::size_t c) const
    {
        return {origin_[0] + h_[0] * (cell_i(c) + 0.5),
                dim_ == 2 ? origin_[1] + h_[1] * (cell_j(c) + 0.5) : 0.0};
    }
    double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }

    // staggered faces; axis = normal direction
    std::size_t face_count(int axis) const
    {
        if (dim_ == 1) return axis == 0 ? static_cast<std::size_t>(counts_[0] - 1) : 0;
        if (axis == 0) return static_cast<std::size_t>(counts_[0] - 1) * counts_[1];
        return static_cast<std::size_t>(counts_[0]) * (counts_[1] - 1);
    }

    bool contains(const Vec2& p, double tol = 1e-12) const
    {
        const double sx = tol * std::max(1.0, extents_[0]);
        if (p.x < origin_[0] - sx || p.x > origin_[0] + extents_[0] + sx) return false;
        if (dim_ == 2) {
            const double sy = tol * std::max(1.0, extents_[1]);
            if (p.y < origin_[1] - sy || p.y > origin_[1] + extents_[1] + sy) return false;
        }
        return true;
    }

    bool operator==(const Grid& o) const
    {
        return dim_ == o.dim_ && counts_ == o.counts_ && extents_ == o.extents_ &&
               origin_ == o.origin_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    Grid(int dim, std::array<int, 2> counts, std::array<double, 2> extents,
         std::array<double, 2> origin)
        : dim_(dim), counts_(counts), extents_(extents), origin_(origin)
    {
        for (int a = 0; a < dim_; ++a) {
            if (counts_[a] < 3)
                throw std::invalid_argument("Grid: need at least 3 nodes per axis");
            if (!(extents_[a] > 0.0))
                throw std::invalid_argument("Grid: extents must be positive");
            h_[a] = extents_[a] / (counts_[a] - 1);
        }
        if (dim_ == 1) {
            counts_[1] = 1;
            extents_[1] = 0.0;
            h_[1] = 0.0;
        }
    }

    int dim_;
    std::array<int, 2> counts_;
    std::array<double, 2> extents_;
    std::array<double, 2> origin_;
    std::array<double, 2> h_{0.0, 0.0};
};

/// One real value per node.
class ScalarField {
public:
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid_(g), v_(g.node_count(), fill)
    {
    }

    template <typename F>
    static ScalarField sample(const Grid& g, F&& fn)
    {
        ScalarField out(g);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            out.v_[k] = fn(g.node_pos(k));
        return out;
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t k) const { return v_[k]; }
    double& operator[](std::size_t k) { return v_[k]; }
    double at(int i, int j = 0) const { return v_[grid_.node_id(i, j)]; }
    double& at(int i, int j = 0) { return v_[grid_.node_id(i, j)]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double min() const
    {
        double m = v_.empty() ? 0.0 : v_[0];
        for (double x : v_) m = std::min(m, x);
        return m;
    }
    double max() const
    {
        double m = v_.empty() ? 0.0 : v_[0];
        for (double x : v_) m = std::max(m, x);
        return m;
    }

    bool all_finite() const
    {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    Grid grid_;
    std::vector<double> v_;
};

/// One d-vector per cell face, staggered by face orientation.
class VectorField {
public:
    explicit VectorField(const Grid& g) : grid_(g)
    {
        comp_[0].assign(g.face_count(0), Vec2{});
        if (g.dim() == 2) comp_[1].assign(g.face_count(1), Vec2{});
    }

    const Grid& grid() const { return grid_; }
    Vec2& face(int axis, std::size_t f) { return comp_[axis][f]; }
    const Vec2& face(int axis, std::size_t f) const { return comp_[axis][f]; }
    std::size_t count(int axis) const { return comp_[axis].size(); }

private:
    Grid grid_;
    std::array<std::vector<Vec2>, 2> comp_;
};

namespace detail {

/// One coefficient of a linear map from nodal values to a sampled gradient.
struct StencilEntry {
    std::size_t node;
    Vec2 coeff;
};

/// Normal difference of one face: the MAC degree of freedom.  The face
/// quadrature weight sums the weights of the gradient samples that contain
/// the face's difference (half volume on boundary rows/columns).
struct FaceStencil {
    std::size_t lo = 0, hi = 0;  // the two nodes the face separates
    int axis = 0;
    double inv_h = 0.0;
    Vec2 position{};
    double weight = 0.0;

    double difference(const std::vector<double>& u) const
    {
        return (u[hi] - u[lo]) * inv_h;
    }
};

inline FaceStencil face_stencil(const Grid& g, int axis, std::size_t f)
{
    FaceStencil s;
    s.axis = axis;
    const double hx = g.spacing(0);

    if (g.dim() == 1) {
        const int i = static_cast<int>(f);
        s.lo = g.node_id(i);
        s.hi = g.node_id(i + 1);
        s.inv_h = 1.0 / hx;
        s.position = {g.origin(0) + hx * (i + 0.5), 0.0};
        s.weight = hx;
        return s;
    }

    const double hy = g.spacing(1);
    const int nx = g.count(0), ny = g.count(1);
    if (axis == 0) {
        const int i = static_cast<int>(f) % (nx - 1);
        const int j = static_cast<int>(f) / (nx - 1);
        s.lo = g.node_id(i, j);
        s.hi = g.node_id(i + 1, j);
        s.inv_h = 1.0 / hx;
        s.position = {g.origin(0) + hx * (i + 0.5), g.origin(1) + hy * j};
        s.weight = hx * hy * ((j == 0 || j == ny - 1) ? 0.5 : 1.0);
    } else {
        const int i = static_cast<int>(f) % nx;
        const int j = static_cast<int>(f) / nx;
        s.lo = g.node_id(i, j);
        s.hi = g.node_id(i, j + 1);
        s.inv_h = 1.0 / hy;
        s.position = {g.origin(0) + hx * i, g.origin(1) + hy * (j + 0.5)};
        s.weight = hx * hy * ((i == 0 || i == nx - 1) ? 0.5 : 1.0);
    }
    return s;
}

/// One full-gradient sample: the constant gradient of the lower-left or
/// upper-right corner triangle of a cell (in 1D, half of the cell's single
/// difference).  Samples tie one x-face to one y-face, carry the exponent of
/// their base corner, and integrate with weight vol/2, so grouping by face
/// reproduces face-averaged coefficients and trapezoidal boundary weights.
struct GradientSample {
    int n = 0;
    std::array<StencilEntry, 3> e{};
    std::size_t p_node = 0;
    double weight = 0.0;
    std::ptrdiff_t face_x = -1;  // index into the axis-0 face array
    std::ptrdiff_t face_y = -1;  // index into the axis-1 face array (2D only)

    Vec2 gradient(const std::vector<double>& u) const
    {
        Vec2 gv{};
        for (int k = 0; k < n; ++k) gv = gv + e[k].coeff * u[e[k].node];
        return gv;
    }
};

inline std::size_t sample_count(const Grid& g) { return 2 * g.cell_total(); }

inline GradientSample gradient_sample(const Grid& g, std::size_t q)
{
    const std::size_t c = q / 2;
    const bool upper = q % 2 != 0;
    const double hx = g.spacing(0);
    GradientSample s;
    s.weight = 0.5 * g.cell_volume();

    if (g.dim() == 1) {
        const int i = g.cell_i(c);
        s.e[s.n++] = {g.node_id(i), {-1.0 / hx, 0.0}};
        s.e[s.n++] = {g.node_id(i + 1), {1.0 / hx, 0.0}};
        s.p_node = g.node_id(upper ? i + 1 : i);
        s.face_x = static_cast<std::ptrdiff_t>(c);
        return s;
    }

    const double hy = g.spacing(1);
    const int i = g.cell_i(c), j = g.cell_j(c);
    const int ncx = g.cell_count(0);
    if (!upper) {  // base corner (i, j)
        s.e[s.n++] = {g.node_id(i, j), {-1.0 / hx, -1.0 / hy}};
        s.e[s.n++] = {g.node_id(i + 1, j), {1.0 / hx, 0.0}};
        s.e[s.n++] = {g.node_id(i, j + 1), {0.0, 1.0 / hy}};
        s.p_node = g.node_id(i, j);
        s.face_x = i + static_cast<std::ptrdiff_t>(ncx) * j;
        s.face_y = i + static_cast<std::ptrdiff_t>(g.count(0)) * j;
    } else {  // base corner (i+1, j+1)
        s.e[s.n++] = {g.node_id(i + 1, j + 1), {1.0 / hx, 1.0 / hy}};
        s.e[s.n++] = {g.node_id(i, j + 1), {-1.0 / hx, 0.0}};
        s.e[s.n++] = {g.node_id(i + 1, j), {0.0, -1.0 / hy}};
        s.p_node = g.node_id(i + 1, j + 1);
        s.face_x = i + static_cast<std::ptrdiff_t>(ncx) * (j + 1);
        s.face_y = (i + 1) + static_cast<std::ptrdiff_t>(g.count(0)) * j;
    }
    return s;
}

/// Scatters per-sample vectors into face storage, averaging with the sample
/// weights: the face's own axis receives the normal component, the other
/// axis the tangential reconstruction.
template <typename SampleValue>
inline void scatter_samples_to_faces(const Grid& g, SampleValue&& value_at,
                                     VectorField& out)
{
    std::array<std::vector<double>, 2> wsum;
    wsum[0].assign(g.face_count(0), 0.0);
    if (g.dim() == 2) wsum[1].assign(g.face_count(1), 0.0);

    for (std::size_t q = 0; q < sample_count(g); ++q) {
        const GradientSample s = gradient_sample(g, q);
        const Vec2 v = value_at(s);
        out.face(0, s.face_x) = out.face(0, s.face_x) + v * s.weight;
        wsum[0][s.face_x] += s.weight;
        if (s.face_y >= 0) {
            out.face(1, s.face_y) = out.face(1, s.face_y) + v * s.weight;
            wsum[1][s.face_y] += s.weight;
        }
    }
    for (int axis = 0; axis < g.dim(); ++axis)
        for (std::size_t f = 0; f < g.face_count(axis); ++f)
            if (wsum[axis][f] > 0.0)
                out.face(axis, f) = out.face(axis, f) * (1.0 / wsum[axis][f]);
}

}  // namespace detail

inline void require_same_grid(const Grid& a, const Grid& b, const char* where)
{
    if (a != b)
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

/// Face-centered gradient: the face's own normal difference plus the
/// sample-averaged tangential component.  Exact on affine fields.
inline VectorField gradient(const ScalarField& u)
{
    const Grid& g = u.grid();
    VectorField out(g);
    detail::scatter_samples_to_faces(
        g, [&](const detail::GradientSample& s) { return s.gradient(u.values()); }, out);
    return out;
}

/// MAC divergence: reads each face's normal component, with the face
/// quadrature weights; the exact negative adjoint of the normal-difference
/// map.  Values at interior nodes, zero on the boundary rows.
inline ScalarField divergence(const VectorField& F)
{
    const Grid& g = F.grid();
    ScalarField out(g, 0.0);
    for (int axis = 0; axis < g.dim(); ++axis) {
        for (std::size_t f = 0; f < g.face_count(axis); ++f) {
            const auto st = detail::face_stencil(g, axis, f);
            const double fn = axis == 0 ? F.face(axis, f).x : F.face(axis, f).y;
            out[st.lo] += st.weight * fn * (-st.inv_h);
            out[st.hi] += st.weight * fn * st.inv_h;
        }
    }
    for (std::size_t k = 0; k < g.node_count(); ++k)
        out[k] = g.is_boundary_node(k) ? 0.0 : -out[k] / g.node_volume(k);
    return out;
}

/// Staggered inner product: per-face weight times the product of normal
/// components (the MAC degrees of freedom).
inline double face_inner(const VectorField& F, const VectorField& G)
{
    require_same_grid(F.grid(), G.grid(), "face_inner");
    const Grid& g = F.grid();
    double acc = 0.0;
    for (int axis = 0; axis < g.dim(); ++axis)
        for (std::size_t f = 0; f < g.face_count(axis); ++f) {
            const auto st = detail::face_stencil(g, axis, f);
            const double a = axis == 0 ? F.face(axis, f).x : F.face(axis, f).y;
            const double b = axis == 0 ? G.face(axis, f).x : G.face(axis, f).y;
            acc += st.weight * a * b;
        }
    return acc;
}

/// Multilinear interpolation at an interior point.
inline double interpolate(const ScalarField& u, const Vec2& p)
{
    const Grid& g = u.grid();
    if (!g.contains(p))
        throw std::invalid_argument("interpolate: point outside domain");

    const auto locate = [](double x, double o, double h, int n) {
        double t = (x - o) / h;
        int i = static_cast<int>(std::floor(t));
        i = std::max(0, std::min(i, n - 2));
        return std::pair<int, double>(i, t - i);
    };

    const auto [i, tx] = locate(p.x, g.origin(0), g.spacing(0), g.count(0));
    if (g.dim() == 1)
        return u.at(i) * (1.0 - tx) + u.at(i + 1) * tx;

    const auto [j, ty] = locate(p.y, g.origin(1), g.spacing(1), g.count(1));
    return (u.at(i, j) * (1.0 - tx) + u.at(i + 1, j) * tx) * (1.0 - ty) +
           (u.at(i, j + 1) * (1.0 - tx) + u.at(i + 1, j + 1) * tx) * ty;
}

/// Gradient vectors at cell centers: the mean of the cell's two corner
/// samples (the bilinear center gradient).
inline std::vector<Vec2> cell_gradients(const ScalarField& u)
{
    const Grid& g = u.grid();
    std::vector<Vec2> out(g.cell_total());
    for (std::size_t c = 0; c < g.cell_total(); ++c) {
        const auto lo = detail::gradient_sample(g, 2 * c);
        const auto hi = detail::gradient_sample(g, 2 * c + 1);
        out[c] = (lo.gradient(u.values()) + hi.gradient(u.values())) * 0.5;
    }
    return out;
}

/// Bilinear interpolation over the cell-center lattice (clamped at edges).
inline Vec2 interpolate_cell_vectors(const Grid& g, const std::vector<Vec2>& cells,
                                     const Vec2& p)
{
    if (!g.contains(p))
        throw std::invalid_argument("interpolate_cell_vectors: point outside domain");
    const auto locate = [](double x, double o, double h, int ncells) {
        double t = (x - o) / h - 0.5;  // cell-center coordinates
        int i = static_cast<int>(std::floor(t));
        i = std::max(0, std::min(i, ncells - 2));
        double s = std::max(0.0, std::min(1.0, t - i));
        return std::pair<int, double>(i, s);
    };
    const auto [i, tx] = locate(p.x, g.origin(0), g.spacing(0), g.cell_count(0));
    if (g.dim() == 1)
        return cells[i] * (1.0 - tx) + cells[i + 1] * tx;
    const auto [j, ty] = locate(p.y, g.origin(1), g.spacing(1), g.cell_count(1));
    const int ncx = g.cell_count(0);
    const auto id = [&](int a, int b) { return static_cast<std::size_t>(a) + static_cast<std::size_t>(ncx) * b; };
    return (cells[id(i, j)] * (1.0 - tx) + cells[id(i + 1, j)] * tx) * (1.0 - ty) +
           (cells[id(i, j + 1)] * (1.0 - tx) + cells[id(i + 1, j + 1)] * tx) * ty;
}

/// CSV rows "index,x[,y],value" with LF line endings.
inline void write_field_csv(const ScalarField& u, std::ostream& os)
{
    const Grid& g = u.grid();
    char buf[128];
    os << (g.dim() == 1 ? "index,x,value\n" : "index,x,y,value\n");
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        const Vec2 p = g.node_pos(k);
        if (g.dim() == 1)
            std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", k, p.x, u[k]);
        else
            std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g\n", k, p.x, p.y, u[k]);
        os << buf;
    }
}

}  // namespace pxflame

#endif
