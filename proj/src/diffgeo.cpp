#include "moebius_lab/diffgeo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/lorentz.hpp"

namespace moebius_lab {

const char* ambient_name(Ambient a) {
  switch (a) {
    case Ambient::Sphere: return "sphere";
    case Ambient::Euclidean: return "euclidean";
    case Ambient::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

bool Box::contains(const std::vector<double>& p, double radius) const {
  if (p.size() != lo.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] - radius < lo[i] || p[i] + radius > hi[i]) return false;
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Chart::Chart(std::string name, Ambient ambient, int dim, Box domain, PointMap point, JetMap jet)
    : name_(std::move(name)),
      ambient_(ambient),
      dim_(dim),
      ambient_dim_(0),
      domain_(std::move(domain)),
      mode_(jet ? DerivativeMode::AnalyticJet : DerivativeMode::FiniteDifference),
      point_(std::move(point)),
      jet_(std::move(jet)) {
  if (dim_ < 1 || static_cast<int>(domain_.lo.size()) != dim_ ||
      static_cast<int>(domain_.hi.size()) != dim_)
    throw Error(ErrorCode::DimensionMismatch, "chart " + name_ + ": domain box does not match dim");
  ambient_dim_ = static_cast<int>(point_(domain_.center()).size());
  const int expected = ambient_ == Ambient::Euclidean ? dim_ + 1 : dim_ + 2;
  if (ambient_dim_ != expected)
    throw Error(ErrorCode::DimensionMismatch,
                "chart " + name_ + ": map has " + std::to_string(ambient_dim_) +
                    " components, expected " + std::to_string(expected));
}

Vector<Taylor> Chart::expand(const Vector<double>& p, int order) const {
  if (!jet_) throw Error(ErrorCode::RequiresAnalyticChart, "chart " + name_ + " has no jets");
  if (static_cast<int>(p.size()) != dim_)
    throw Error(ErrorCode::DimensionMismatch, "chart " + name_ + ": parameter size");
  auto space = TaylorSpace::get(dim_, order);
  Vector<Taylor> vars;
  vars.reserve(p.size());
  for (int a = 0; a < dim_; ++a) vars.push_back(Taylor::variable(space, a, p[a]));
  return jet_(vars);
}

Vector<Taylor> Chart::apply(const Vector<Taylor>& p) const {
  if (!jet_) throw Error(ErrorCode::RequiresAnalyticChart, "chart " + name_ + " has no jets");
  return jet_(p);
}

Chart Chart::with_mode(DerivativeMode mode) const {
  Chart c = *this;
  if (mode == DerivativeMode::AnalyticJet && !jet_)
    throw Error(ErrorCode::RequiresAnalyticChart, "chart " + name_ + " has no jets");
  c.mode_ = mode;
  return c;
}

Chart Chart::on_sphere() const {
  if (ambient_ == Ambient::Sphere) return *this;
  PointMap pt;
  JetMap jt;
  if (ambient_ == Ambient::Euclidean) {
    pt = [f = point_](const Vector<double>& p) { return inv_stereographic(f(p)); };
    if (jet_) jt = [f = jet_](const Vector<Taylor>& p) { return inv_stereographic(f(p)); };
  } else {
    pt = [f = point_](const Vector<double>& p) { return hyperboloid_to_sphere(f(p)); };
    if (jet_) jt = [f = jet_](const Vector<Taylor>& p) { return hyperboloid_to_sphere(f(p)); };
  }
  Chart c(name_, Ambient::Sphere, dim_, domain_, std::move(pt), std::move(jt));
  c.mode_ = mode_;
  return c;
}

Chart Chart::transformed(const Eigen::MatrixXd& t) const {
  Chart s = on_sphere();
  if (t.rows() != s.ambient_dim_ + 1 || t.cols() != t.rows())
    throw Error(ErrorCode::DimensionMismatch, "transformed: matrix size");
  PointMap pt = [f = s.point_, t](const Vector<double>& p) { return moebius_action(t, f(p)); };
  JetMap jt;
  if (s.jet_) jt = [f = s.jet_, t](const Vector<Taylor>& p) { return moebius_action(t, f(p)); };
  Chart c(name_, Ambient::Sphere, dim_, domain_, std::move(pt), std::move(jt));
  c.mode_ = mode_;
  return c;
}

Chart Chart::scaled(double k) const {
  if (ambient_ != Ambient::Euclidean)
    throw Error(ErrorCode::InvalidParameter, "scaled: only Euclidean charts can be scaled");
  PointMap pt = [f = point_, k](const Vector<double>& p) { return moebius_lab::scaled(k, f(p)); };
  JetMap jt;
  if (jet_) jt = [f = jet_, k](const Vector<Taylor>& p) { return moebius_lab::scaled(k, f(p)); };
  Chart c(name_, ambient_, dim_, domain_, std::move(pt), std::move(jt));
  c.mode_ = mode_;
  return c;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd to_eigen(const Vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void allocate(JetPoint& jet, int n, int order) {
  jet.dim = n;
  jet.order = order;
  jet.d1.assign(order >= 1 ? n : 0, Eigen::VectorXd());
  jet.d2.assign(order >= 2 ? n * n : 0, Eigen::VectorXd());
  jet.d3.assign(order >= 3 ? n * n * n : 0, Eigen::VectorXd());
}

// Visits every sorted multi-index (a <= b <= c ...) of length k.
template <class F>
void for_each_sorted(int n, int k, F&& f) {
  std::vector<int> idx(k, 0);
  while (true) {
    f(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - 1) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[pos];
  }
}

// Writes `v` to every permutation slot of the sorted index list.
void store(JetPoint& jet, const std::vector<int>& idx, const Eigen::VectorXd& v) {
  const int n = jet.dim;
  std::vector<int> perm = idx;
  do {
    if (perm.size() == 1) jet.d1[perm[0]] = v;
    if (perm.size() == 2) jet.d2[perm[0] * n + perm[1]] = v;
    if (perm.size() == 3) jet.d3[(perm[0] * n + perm[1]) * n + perm[2]] = v;
  } while (std::next_permutation(perm.begin(), perm.end()));
}

JetPoint analytic_jet(const Chart& chart, const std::vector<double>& p, int order) {
  const int n = chart.dim();
  const Vector<Taylor> t = chart.expand(p, order);
  const int d = static_cast<int>(t.size());
  JetPoint jet;
  allocate(jet, n, order);
  jet.value.resize(d);
  for (int i = 0; i < d; ++i) jet.value[i] = t[i].value();
  std::vector<int> alpha(n);
  for (int k = 1; k <= order; ++k) {
    for_each_sorted(n, k, [&](const std::vector<int>& idx) {
      std::fill(alpha.begin(), alpha.end(), 0);
      for (int a : idx) ++alpha[a];
      Eigen::VectorXd v(d);
      for (int i = 0; i < d; ++i) v[i] = t[i].derivative(alpha);
      store(jet, idx, v);
    });
  }
  return jet;
}

struct Stencil1D {
  std::vector<double> offsets;
  std::vector<double> weights;
};

// Second-order accurate central stencils, weights before division by h^m.
const Stencil1D& central_stencil(int m) {
  static const std::array<Stencil1D, 4> table = {{
      {{0.0}, {1.0}},
      {{-1.0, 1.0}, {-0.5, 0.5}},
      {{-1.0, 0.0, 1.0}, {1.0, -2.0, 1.0}},
      {{-2.0, -1.0, 1.0, 2.0}, {-0.5, 1.0, -1.0, 0.5}},
  }};
  return table[m];
}

Eigen::VectorXd tensor_stencil(const Chart& chart, const std::vector<double>& p,
                               const std::vector<int>& counts, double h) {
  const int n = static_cast<int>(p.size());
  std::vector<int> vars;
  for (int a = 0; a < n; ++a)
    if (counts[a] > 0) vars.push_back(a);
  int k = 0;
  for (int c : counts) k += c;

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(chart.ambient_dim());
  std::vector<std::size_t> pos(vars.size(), 0);
  std::vector<double> q = p;
  while (true) {
    double w = 1.0;
    q = p;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const Stencil1D& s = central_stencil(counts[vars[v]]);
      w *= s.weights[pos[v]];
      q[vars[v]] += s.offsets[pos[v]] * h;
    }
    acc += w * to_eigen(chart(q));
    std::size_t v = 0;
    for (; v < vars.size(); ++v) {
      if (++pos[v] < central_stencil(counts[vars[v]]).offsets.size()) break;
      pos[v] = 0;
    }
    if (v == vars.size()) break;
  }
  return acc / std::pow(h, k);
}

JetPoint fd_jet(const Chart& chart, const std::vector<double>& p, int order) {
  const int n = chart.dim();
  const double reach = order >= 3 ? 2.0 * fd_step(3, p) : fd_step(order, p);
  if (!chart.domain().contains(p, reach))
    throw Error(ErrorCode::OutsideDomain,
                "chart " + chart.name() + ": point closer to the domain boundary than the stencil");
  JetPoint jet;
  allocate(jet, n, order);
  jet.value = to_eigen(chart(p));
  std::vector<int> counts(n);
  for (int k = 1; k <= order; ++k) {
    const double h = fd_step(k, p);
    for_each_sorted(n, k, [&](const std::vector<int>& idx) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int a : idx) ++counts[a];
      const Eigen::VectorXd coarse = tensor_stencil(chart, p, counts, h);
      const Eigen::VectorXd fine = tensor_stencil(chart, p, counts, 0.5 * h);
      store(jet, idx, (4.0 * fine - coarse) / 3.0);
    });
  }
  return jet;
}

}  // namespace

double fd_step(int k, const std::vector<double>& p) {
  double norm = 0.0;
  for (double v : p) norm += v * v;
  const double eps = std::numeric_limits<double>::epsilon();
  return std::pow(eps, 1.0 / (4.0 + k)) * std::max(1.0, std::sqrt(norm));
}

JetPoint eval_jet(const Chart& chart, const std::vector<double>& p, int order) {
  return eval_jet(chart, p, order, chart.mode());
}

JetPoint eval_jet(const Chart& chart, const std::vector<double>& p, int order,
                  DerivativeMode mode) {
  if (order < 0 || order > 3)
    throw Error(ErrorCode::InvalidParameter, "eval_jet: order must be in 0..3");
  if (static_cast<int>(p.size()) != chart.dim())
    throw Error(ErrorCode::DimensionMismatch, "eval_jet: parameter size");
  if (mode == DerivativeMode::AnalyticJet) return analytic_jet(chart, p, order);
  return fd_jet(chart, p, order);
}

// ---------------------------------------------------------------------------

PrincipalDecomposition principal_decomposition(const Eigen::MatrixXd& first,
                                               const Eigen::MatrixXd& second) {
  if (first.rows() != first.cols() || second.rows() != first.rows() ||
      second.cols() != first.cols())
    throw Error(ErrorCode::DimensionMismatch, "principal_decomposition: shapes");
  const Eigen::MatrixXd sym_first = 0.5 * (first + first.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym_first);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "first fundamental form is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  // M = L^{-1} II L^{-T}
  Eigen::MatrixXd m = l.triangularView<Eigen::Lower>().solve(0.5 * (second + second.transpose()));
  m = l.triangularView<Eigen::Lower>().solve(m.transpose()).transpose();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  PrincipalDecomposition out;
  out.curvatures = es.eigenvalues();
  out.frame = l.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  return out;
}

DistinctClasses group_distinct(const std::vector<double>& sorted, double rel_gap) {
  DistinctClasses out;
  if (sorted.empty()) return out;
  double scale = 0.0;
  for (double v : sorted) scale = std::max(scale, std::abs(v));
  std::vector<std::vector<double>> runs{{sorted[0]}};
  out.class_of.push_back(0);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = sorted[i] - sorted[i - 1];
    if (gap > rel_gap * scale) runs.emplace_back();
    runs.back().push_back(sorted[i]);
    out.class_of.push_back(static_cast<int>(runs.size()) - 1);
  }
  out.count = static_cast<int>(runs.size());
  for (const auto& run : runs) {
    out.multiplicities.push_back(static_cast<int>(run.size()));
    out.representatives.push_back(std::accumulate(run.begin(), run.end(), 0.0) /
                                  static_cast<double>(run.size()));
    if (run.size() == 1) ++out.simple;
  }
  return out;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd oriented_normal(const Eigen::MatrixXd& tangents, const Eigen::VectorXd* position) {
  const int d = static_cast<int>(tangents.rows());
  const int n = static_cast<int>(tangents.cols());
  const int rows = n + (position ? 1 : 0);
  if (rows != d - 1)
    throw Error(ErrorCode::DimensionMismatch, "oriented_normal: codimension must be one");
  Eigen::MatrixXd span(d, rows);
  span.leftCols(n) = tangents;
  if (position) span.col(n) = *position;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span.transpose(), Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv[rows - 1] <= 1e-10 * std::max(1.0, sv[0]))
    throw Error(ErrorCode::RankDeficient, "tangent vectors are linearly dependent");
  Eigen::VectorXd nu = svd.matrixV().col(d - 1);
  Eigen::MatrixXd frame(d, d);
  frame.leftCols(n) = tangents;
  frame.col(n) = nu;
  if (position) frame.col(n + 1) = *position;
  if (frame.determinant() < 0) nu = -nu;
  return nu.normalized();
}

PointGeometry fundamental_forms(const JetPoint& jet, Ambient ambient) {
  if (ambient == Ambient::Hyperbolic)
    throw Error(ErrorCode::InvalidParameter,
                "fundamental_forms: push hyperbolic jets to the sphere first");
  if (jet.order < 2) throw Error(ErrorCode::InvalidParameter, "fundamental_forms needs order 2");
  const int n = jet.dim;
  const int d = static_cast<int>(jet.value.size());
  PointGeometry g;
  g.ambient = ambient;
  g.position = jet.value;
  g.tangents.resize(d, n);
  for (int a = 0; a < n; ++a) g.tangents.col(a) = jet.first(a);
  g.first = g.tangents.transpose() * g.tangents;
  g.normal = oriented_normal(g.tangents, ambient == Ambient::Sphere ? &g.position : nullptr);
  g.second.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.second(a, b) = jet.second(a, b).dot(g.normal);
  g.second = 0.5 * (g.second + g.second.transpose());
  PrincipalDecomposition pd = principal_decomposition(g.first, g.second);
  g.principal_curvatures = pd.curvatures;
  g.principal_frame = pd.frame;
  g.mean_curvature = pd.curvatures.sum() / n;
  return g;
}

PointGeometry fundamental_forms(const Chart& chart, const std::vector<double>& p) {
  if (chart.ambient() == Ambient::Hyperbolic) {
    const Chart s = chart.on_sphere();
    return fundamental_forms(eval_jet(s, p, 2), Ambient::Sphere);
  }
  return fundamental_forms(eval_jet(chart, p, 2), chart.ambient());
}

}  // namespace moebius_lab
