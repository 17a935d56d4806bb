#include "ppde/path_core.hpp"

#include <algorithm>
#include <cmath>

#include "ppde/rng.hpp"

namespace ppde {

const char* err_name(Err e) {
  switch (e) {
    case Err::OutOfDomain: return "OutOfDomain";
    case Err::HorizonExceeded: return "HorizonExceeded";
    case Err::IndexMismatch: return "IndexMismatch";
    case Err::GridMismatch: return "GridMismatch";
    case Err::NotInClosure: return "NotInClosure";
    case Err::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case Err::NotSmooth: return "NotSmooth";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::TimeMismatch: return "TimeMismatch";
    case Err::UnknownName: return "UnknownName";
    case Err::BadParams: return "BadParams";
    case Err::ZeroTime: return "ZeroTime";
    case Err::CflViolation: return "CflViolation";
    case Err::LiftMismatch: return "LiftMismatch";
    case Err::StubNotInLattice: return "StubNotInLattice";
    case Err::PreconditionFailed: return "PreconditionFailed";
    case Err::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

TimeGrid::TimeGrid(double T, int N) : horizon(T), steps(N) {
  if (T <= 0.0 || N < 1) throw Error(Err::BadParams, "TimeGrid requires T > 0, N >= 1");
}

SpatialGrid::SpatialGrid(Vec lo, Vec hi, int M)
    : lower(std::move(lo)), upper(std::move(hi)), points_per_axis(M) {
  if (lower.size() != upper.size())
    throw Error(Err::DimensionMismatch, "SpatialGrid bounds dimension mismatch");
  if (M < 3) throw Error(Err::BadParams, "SpatialGrid requires M >= 3");
  for (int i = 0; i < dim(); ++i)
    if (!(lower[i] < upper[i])) throw Error(Err::BadParams, "SpatialGrid requires lower < upper");
}

SpatialGrid::SpatialGrid(double lo, double hi, int M)
    : SpatialGrid(Vec::Constant(1, lo), Vec::Constant(1, hi), M) {}

Vec SpatialGrid::point(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != dim())
    throw Error(Err::DimensionMismatch, "grid index dimension mismatch");
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) x[i] = coord(i, idx[i]);
  return x;
}

bool SpatialGrid::in_open(const Vec& x) const {
  if (x.size() != dim()) throw Error(Err::DimensionMismatch, "point dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!(x[i] > lower[i] && x[i] < upper[i])) return false;
  return true;
}

bool SpatialGrid::in_closure(const Vec& x) const {
  if (x.size() != dim()) throw Error(Err::DimensionMismatch, "point dimension mismatch");
  constexpr double slack = 1e-12;
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  return true;
}

int SpatialGrid::nearest_index(int axis, double x) const {
  int i = static_cast<int>(std::lround((x - lower[axis]) / spacing(axis)));
  return std::clamp(i, 0, points_per_axis - 1);
}

PathStub::PathStub(TimeGrid g, Mat v) : grid(g), values(std::move(v)) {
  if (values.cols() < 1) throw Error(Err::BadParams, "PathStub needs at least one value");
  if (k() > grid.steps) throw Error(Err::HorizonExceeded, "stub index past horizon");
}

PathStub PathStub::truncated(int j) const {
  if (j < 0 || j > k()) throw Error(Err::IndexMismatch, "truncation index out of range");
  return PathStub(grid, values.leftCols(j + 1));
}

PathStub make_stub(const TimeGrid& g, const std::vector<double>& vals) {
  Mat m(1, vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) m(0, i) = vals[i];
  return PathStub(g, std::move(m));
}

PathStub vertical_bump(const PathStub& w, const Vec& x, const SpatialGrid& q) {
  Vec shifted = w.terminal() + x;
  if (!q.in_closure(shifted))
    throw Error(Err::OutOfDomain, "bumped terminal value leaves the closed box");
  PathStub out = w;
  out.values.col(out.k()) = shifted;
  return out;
}

PathStub flat_extend(const PathStub& w, int steps) {
  if (steps < 0) throw Error(Err::BadParams, "negative extension");
  if (w.k() + steps > w.grid.steps)
    throw Error(Err::HorizonExceeded, "flat extension past horizon");
  Mat v(w.dim(), w.k() + steps + 1);
  v.leftCols(w.k() + 1) = w.values;
  for (int j = 1; j <= steps; ++j) v.col(w.k() + j) = w.terminal();
  return PathStub(w.grid, std::move(v));
}

PathStub concat(const PathStub& head, const PathStub& tail) {
  if (!(head.grid == tail.grid)) throw Error(Err::GridMismatch, "concat across grids");
  // The tail is a stub on [t_kbar, t_k], stored with its full prefix; the
  // junction index is head's terminal index and the value there is tail's.
  const int kbar = head.k();
  if (tail.k() < kbar) throw Error(Err::IndexMismatch, "tail ends before the junction");
  if (tail.values.cols() <= kbar)
    throw Error(Err::IndexMismatch, "tail does not reach the junction index");
  Mat v(head.dim(), tail.k() + 1);
  v.leftCols(kbar) = head.values.leftCols(kbar);
  v.rightCols(tail.k() + 1 - kbar) = tail.values.rightCols(tail.k() + 1 - kbar);
  return PathStub(head.grid, std::move(v));
}

double distance_parabolic(const PathStub& w, const PathStub& v) {
  if (!(w.grid == v.grid)) throw Error(Err::GridMismatch, "metric across grids");
  const double dt = w.grid.dt();
  double d = (w.terminal() - v.terminal()).squaredNorm();
  const int kmax = std::max(w.k(), v.k());
  for (int j = 0; j < kmax; ++j) {
    const Vec a = w.values.col(std::min(j, w.k()));
    const Vec b = v.values.col(std::min(j, v.k()));
    d += (a - b).squaredNorm() * dt;
  }
  return d;
}

double distance_first_order(const PathStub& g, const PathStub& h) {
  if (!(g.grid == h.grid)) throw Error(Err::GridMismatch, "metric across grids");
  const double dt = g.grid.dt();
  const double s = g.time(), sb = h.time();
  const double smin = std::min(s, sb);
  double d = (g.terminal() - h.terminal()).squaredNorm() + (s - sb) * (s - sb);
  const int jmax = std::min(g.k(), h.k());
  for (int j = 0; j < jmax; ++j) {
    const double r = g.grid.node(j);
    d += (smin - r) * (g.values.col(j) - h.values.col(j)).squaredNorm() * dt;
  }
  return d;
}

bool in_lambda_qbar(const PathStub& w, const SpatialGrid& q) {
  for (int j = 0; j < w.k(); ++j)
    if (!q.in_open(w.values.col(j))) return false;
  return q.in_closure(w.terminal());
}

DomainClass classify(const PathStub& w, const SpatialGrid& q) {
  for (int j = 0; j < w.k(); ++j)
    if (!q.in_open(w.values.col(j)))
      throw Error(Err::NotInClosure, "pre-terminal value not strictly inside Q");
  if (!q.in_closure(w.terminal()))
    throw Error(Err::NotInClosure, "terminal value outside the closed box");
  if (w.k() == w.grid.steps || q.on_boundary(w.terminal())) return DomainClass::Boundary;
  return DomainClass::Interior;
}

namespace {

// Grid index tuples in lexicographic order.
std::vector<std::vector<int>> index_tuples(const SpatialGrid& q, bool interior) {
  const int lo = interior ? 1 : 0;
  const int hi = interior ? q.points_per_axis - 2 : q.points_per_axis - 1;
  std::vector<std::vector<int>> out;
  std::vector<int> cur(q.dim(), lo);
  while (true) {
    out.push_back(cur);
    int axis = q.dim() - 1;
    while (axis >= 0 && cur[axis] == hi) cur[axis--] = lo;
    if (axis < 0) break;
    ++cur[axis];
  }
  return out;
}

struct EnumState {
  const SpatialGrid& q;
  const EnumOptions& opt;
  const std::function<void(const PathStub&)>& visit;
  std::vector<std::vector<int>> interior_pts;
  std::vector<std::vector<int>> terminal_pts;
  std::size_t count = 0;

  void emit(const PathStub& s) {
    if (++count > opt.cap)
      throw Error(Err::SearchSpaceTooLarge, "continuation cap exceeded");
    visit(s);
  }

  // work holds a valid stub whose columns up to `level` are fixed; choose
  // the value at `level`, emit the stub ending there, and recurse.
  void recurse(Mat& work, int level, const PathStub& base) {
    for (const auto& idx : terminal_pts) {
      work.col(level) = q.point(idx);
      // skip the duplicate of the base stub itself (already emitted)
      if (level == base.k() && work.col(level) == base.terminal()) continue;
      emit(PathStub(base.grid, work.leftCols(level + 1)));
    }
    if (level >= opt.k_max) return;
    for (const auto& idx : interior_pts) {
      work.col(level) = q.point(idx);
      recurse(work, level + 1, base);
    }
  }
};

}  // namespace

void for_each_continuation(const PathStub& w, const SpatialGrid& q,
                           const EnumOptions& opt,
                           const std::function<void(const PathStub&)>& visit) {
  if (opt.k_max < w.k() || opt.k_max > w.grid.steps)
    throw Error(Err::BadParams, "k_max out of range");
  if (opt.interior_only && opt.k_max > w.grid.steps - 1)
    throw Error(Err::BadParams, "interior-only enumeration cannot reach the horizon");

  EnumState st{q, opt, visit,
               index_tuples(q, /*interior=*/true),
               index_tuples(q, /*interior=*/opt.interior_only)};
  st.emit(w);
  if (classify(w, q) == DomainClass::Boundary) return;

  Mat work(w.dim(), opt.k_max + 1);
  work.leftCols(w.k() + 1) = w.values;
  st.recurse(work, w.k(), w);
}

std::vector<PathStub> enumerate_continuations(const PathStub& w, const SpatialGrid& q,
                                              const EnumOptions& opt) {
  std::vector<PathStub> out;
  for_each_continuation(w, q, opt, [&](const PathStub& s) { out.push_back(s); });
  return out;
}

PathStub random_interior_stub(const TimeGrid& g, const SpatialGrid& q, std::uint64_t key) {
  const int kmax = std::max(1, g.steps - 1);
  const int k = 1 + static_cast<int>(counter_bits(key, 0, 0) % static_cast<std::uint64_t>(kmax));
  Mat v(q.dim(), k + 1);
  std::uint64_t ctr = 1;
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i < q.dim(); ++i) {
      const int idx =
          1 + static_cast<int>(counter_bits(key, 0, ctr++) %
                               static_cast<std::uint64_t>(q.points_per_axis - 2));
      v(i, j) = q.coord(i, idx);
    }
  return PathStub(g, std::move(v));
}

}  // namespace ppde
