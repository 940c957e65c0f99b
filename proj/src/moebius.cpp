#include "moebius_lab/moebius.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/lorentz.hpp"

namespace moebius_lab {

namespace {

using TV = Vector<Taylor>;
using TM = Matrix<Taylor>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TV partial(const TV& v, int a) {
  TV out;
  out.reserve(v.size());
  for (const Taylor& x : v) out.push_back(x.partial(a));
  return out;
}

VectorXd values(const TV& v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].value();
  return out;
}

MatrixXd values(const TM& m) {
  MatrixXd out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j].value();
  return out;
}

double max_abs(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Chart sphere_or_euclidean(const Chart& chart) {
  return chart.ambient() == Ambient::Hyperbolic ? chart.on_sphere() : chart;
}

template <class S>
S conformal_factor_from(const S& norm2, const S& H, int n, double threshold) {
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "Moebius invariants need dim >= 2");
  const S dev = norm2 - static_cast<double>(n) * H * H;
  if (value_of(dev) < threshold * (1.0 + value_of(norm2)))
    throw Error(ErrorCode::Umbilic, "umbilic point; Moebius invariants undefined");
  using std::sqrt;
  return sqrt(static_cast<double>(n) / (n - 1) * dev);
}

/// ((1 + |f|^2)/2, (1 - |f|^2)/2, f): the light-cone lift of sigma(f) scaled by
/// (1 + |f|^2)/2.
template <class S>
Vector<S> euclidean_lift(const Vector<S>& f) {
  const S r2 = dot(f, f);
  Vector<S> out;
  out.reserve(f.size() + 2);
  out.push_back(0.5 * (1.0 + r2));
  out.push_back(0.5 * (1.0 - r2));
  for (const S& v : f) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Taylor fields of the whole pipeline around the expansion point.

struct Fields {
  int n = 0;
  bool sphere = true;
  TV X;
  std::vector<TV> dX;
  TM I, Iinv, II;
  TV nu;
  Taylor H, rho;
  TV Y, xi, N;
  std::vector<TV> dY, dN;
  TM g, ginv;
  std::vector<Taylor> gamma;  // [(a*n + b)*n + c]
  TM Bc, Ac;
  TV Cc, Calt;
  VectorXd lambda;

  const Taylor& Gamma(int a, int b, int c) const { return gamma[(a * n + b) * n + c]; }
};

Fields compute_fields(const Chart& chart_in, const std::vector<double>& p,
                      const MoebiusOptions& opts) {
  const Chart chart = sphere_or_euclidean(chart_in);
  if (chart.mode() != DerivativeMode::AnalyticJet)
    throw Error(ErrorCode::RequiresAnalyticChart,
                "chart " + chart.name() + " has no jets; frame-level invariants need them");
  Fields f;
  const int n = chart.dim();
  f.n = n;
  f.sphere = chart.ambient() == Ambient::Sphere;
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "Moebius invariants need dim >= 2");

  f.X = chart.expand(p, opts.jet_order);
  const int d = static_cast<int>(f.X.size());
  for (int a = 0; a < n; ++a) f.dX.push_back(partial(f.X, a));
  std::vector<TV> ddX(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) ddX[a * n + b] = ddX[b * n + a] = partial(f.dX[a], b);

  f.I = zeros_like<Taylor>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) f.I[a][b] = f.I[b][a] = dot(f.dX[a], f.dX[b]);
  f.Iinv = invert(f.I);

  // Smooth unit normal: project the oriented normal at p onto the normal line.
  MatrixXd tangents(d, n);
  for (int a = 0; a < n; ++a) tangents.col(a) = values(f.dX[a]);
  const VectorXd x0 = values(f.X);
  const VectorXd w = oriented_normal(tangents, f.sphere ? &x0 : nullptr);
  TV wt(w.data(), w.data() + d);
  std::vector<Taylor> tw(n);
  for (int a = 0; a < n; ++a) tw[a] = dot(f.dX[a], wt);
  f.nu = wt;
  for (int a = 0; a < n; ++a) {
    Taylor coef = f.Iinv[a][0] * tw[0];
    for (int b = 1; b < n; ++b) coef += f.Iinv[a][b] * tw[b];
    f.nu = axpy(-coef, f.dX[a], f.nu);
  }
  if (f.sphere) f.nu = axpy(-dot(f.X, wt), f.X, f.nu);
  f.nu = scaled(1.0 / sqrt(dot(f.nu, f.nu)), f.nu);

  f.II = zeros_like<Taylor>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) f.II[a][b] = f.II[b][a] = dot(ddX[a * n + b], f.nu);

  const TM shape = matmul(f.Iinv, f.II);
  f.H = trace(shape) / static_cast<double>(n);
  const Taylor norm2 = trace(matmul(shape, shape));
  f.rho = conformal_factor_from(norm2, f.H, n, opts.umbilic_threshold);
  f.lambda = principal_decomposition(values(f.I), values(f.II)).curvatures;

  if (f.sphere) {
    f.Y.push_back(f.rho);
    for (const Taylor& v : f.X) f.Y.push_back(f.rho * v);
    f.xi.push_back(f.H);
    for (int i = 0; i < d; ++i) f.xi.push_back(f.H * f.X[i] + f.nu[i]);
  } else {
    const TV lift = euclidean_lift(f.X);
    f.Y = scaled(f.rho, lift);
    const Taylor fn = dot(f.X, f.nu);
    f.xi = scaled(f.H, lift);
    f.xi[0] += fn;
    f.xi[1] -= fn;
    for (int i = 0; i < d; ++i) f.xi[i + 2] += f.nu[i];
  }

  const Taylor rho2 = f.rho * f.rho;
  const Taylor inv_rho2 = 1.0 / rho2;
  f.g = zeros_like<Taylor>(n, n);
  f.ginv = zeros_like<Taylor>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      f.g[a][b] = rho2 * f.I[a][b];
      f.ginv[a][b] = inv_rho2 * f.Iinv[a][b];
    }
  // dg[(c*n + a)*n + b] = d_c g_ab
  std::vector<Taylor> dg(n * n * n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        dg[(c * n + a) * n + b] = dg[(c * n + b) * n + a] = f.g[a][b].partial(c);
  auto dgi = [&](int c, int a, int b) -> const Taylor& { return dg[(c * n + a) * n + b]; };
  f.gamma.assign(n * n * n, Taylor(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        Taylor s(0.0);
        for (int e = 0; e < n; ++e) s += f.ginv[a][e] * (dgi(b, e, c) + dgi(c, e, b) - dgi(e, b, c));
        f.gamma[(a * n + b) * n + c] = f.gamma[(a * n + c) * n + b] = 0.5 * s;
      }

  for (int a = 0; a < n; ++a) f.dY.push_back(partial(f.Y, a));
  const int D = static_cast<int>(f.Y.size());
  TV lap(D, Taylor(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      TV hess = partial(f.dY[a], b);
      for (int c = 0; c < n; ++c) hess = axpy(-f.Gamma(c, a, b), f.dY[c], hess);
      lap = axpy(f.ginv[a][b], hess, lap);
    }
  const double nd = static_cast<double>(n);
  f.N = axpy(lorentz_dot(lap, lap) * (-0.5 / (nd * nd)), f.Y, scaled(-1.0 / nd, lap));
  for (int a = 0; a < n; ++a) f.dN.push_back(partial(f.N, a));

  f.Bc = zeros_like<Taylor>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) f.Bc[a][b] = f.Bc[b][a] = f.rho * (f.II[a][b] - f.H * f.I[a][b]);

  const Taylor log_rho = log(f.rho);
  std::vector<Taylor> dlog(n), dH(n);
  for (int a = 0; a < n; ++a) {
    dlog[a] = log_rho.partial(a);
    dH[a] = f.H.partial(a);
  }
  std::vector<Taylor> raised(n, Taylor(0.0));  // I^{bd} d_d log rho
  for (int b = 0; b < n; ++b)
    for (int e = 0; e < n; ++e) raised[b] += f.Iinv[b][e] * dlog[e];
  const Taylor inv_rho = 1.0 / f.rho;
  for (int a = 0; a < n; ++a) {
    Taylor s = dH[a];
    for (int b = 0; b < n; ++b) s += (f.II[a][b] - f.H * f.I[a][b]) * raised[b];
    f.Cc.push_back(-(inv_rho * s));
  }

  f.Ac = zeros_like<Taylor>(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) f.Ac[a][b] = lorentz_dot(f.dN[a], f.dY[b]);
    f.Calt.push_back(lorentz_dot(f.dN[a], f.xi));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Frame gauge.

MatrixXd g_orthonormalize(const MatrixXd& candidates, const MatrixXd& g, int wanted) {
  const int n = static_cast<int>(candidates.rows());
  double scale = 0.0;
  for (int c = 0; c < candidates.cols(); ++c)
    scale = std::max(scale, std::sqrt(std::max(0.0, candidates.col(c).dot(g * candidates.col(c)))));
  MatrixXd out(n, 0);
  for (int c = 0; c < candidates.cols() && out.cols() < wanted; ++c) {
    VectorXd v = candidates.col(c);
    for (int j = 0; j < out.cols(); ++j) v -= out.col(j).dot(g * v) * out.col(j);
    const double after = std::sqrt(std::max(0.0, v.dot(g * v)));
    // Projections of nearly normal coordinate vectors carry only rounding noise.
    if (after <= 1e-6 * scale) continue;
    out.conservativeResize(n, out.cols() + 1);
    out.col(out.cols() - 1) = v / after;
  }
  return out;
}

// Basis of span(W) aligned with the eigenvectors of A restricted to it; where
// A is scalar on a subspace, the g-projections of the coordinate vectors are
// used instead.
MatrixXd fix_gauge(const MatrixXd& W, const MatrixXd& g, const MatrixXd& A, double scale,
                   bool& degenerate) {
  const int m = static_cast<int>(W.cols());
  if (m == 1) return W;
  const MatrixXd restricted = 0.5 * (W.transpose() * (A + A.transpose()) * W);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(restricted);
  const VectorXd& ev = es.eigenvalues();
  const MatrixXd rotated = W * es.eigenvectors();
  MatrixXd out(W.rows(), 0);
  int start = 0;
  for (int i = 1; i <= m; ++i) {
    if (i < m && ev[i] - ev[i - 1] <= 1e-8 * scale) continue;
    const int len = i - start;
    MatrixXd block = rotated.middleCols(start, len);
    if (len > 1) {
      degenerate = true;
      const MatrixXd proj = block * block.transpose() * g;  // columns: projected coordinate vectors
      block = g_orthonormalize(proj, g, len);
    }
    out.conservativeResize(W.rows(), out.cols() + len);
    out.rightCols(len) = block;
    start = i;
  }
  return out;
}

struct Gauge {
  MatrixXd E;
  VectorXd b;
  DistinctClasses classes;
  bool degenerate = false;
};

Gauge choose_frame(const MatrixXd& g, const MatrixXd& B, const MatrixXd& A, double rel_gap) {
  Gauge out;
  const PrincipalDecomposition pd = principal_decomposition(g, B);
  out.b = pd.curvatures;
  out.classes = group_distinct(std::vector<double>(out.b.data(), out.b.data() + out.b.size()),
                               rel_gap);
  out.E = pd.frame;
  const double scale = std::max(1.0, max_abs(A));
  int start = 0;
  for (int m : out.classes.multiplicities) {
    if (m > 1)
      out.E.middleCols(start, m) = fix_gauge(pd.frame.middleCols(start, m), g, A, scale,
                                             out.degenerate);
    start += m;
  }
  for (int i = 0; i < out.E.cols(); ++i) {
    Eigen::Index k;
    out.E.col(i).cwiseAbs().maxCoeff(&k);
    if (out.E(k, i) < 0) out.E.col(i) = -out.E.col(i);
  }
  return out;
}

MatrixXd frame_components(const MatrixXd& coord, const MatrixXd& E) {
  return E.transpose() * coord * E;
}

template <class F>
double max_over(int n, int arity, F&& f) {
  double m = 0.0;
  std::vector<int> idx(arity, 0);
  while (true) {
    m = std::max(m, std::abs(f(idx)));
    int pos = arity - 1;
    while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
    if (pos < 0) return m;
  }
}

}  // namespace

int stereographic_orientation_sign(int n) { return n % 2 == 1 ? 1 : -1; }

// ---------------------------------------------------------------------------

namespace {

struct Basic {
  PointGeometry geometry;
  double rho = 0.0;
};

Basic basic(const Chart& chart_in, const std::vector<double>& p, const MoebiusOptions& opts) {
  const Chart chart = sphere_or_euclidean(chart_in);
  Basic out;
  out.geometry = fundamental_forms(eval_jet(chart, p, 2), chart.ambient());
  const int n = chart.dim();
  const MatrixXd shape = out.geometry.first.ldlt().solve(out.geometry.second);
  out.rho = conformal_factor_from((shape * shape).trace(), out.geometry.mean_curvature, n,
                                  opts.umbilic_threshold);
  return out;
}

}  // namespace

double conformal_factor(const Chart& chart, const std::vector<double>& p,
                        const MoebiusOptions& opts) {
  return basic(chart, p, opts).rho;
}

Eigen::VectorXd moebius_position(const Chart& chart, const std::vector<double>& p,
                                 const MoebiusOptions& opts) {
  const Basic b = basic(chart, p, opts);
  const VectorXd& x = b.geometry.position;
  if (b.geometry.ambient == Ambient::Sphere) {
    VectorXd y(x.size() + 1);
    y << 1.0, x;
    return b.rho * y;
  }
  const Vector<double> lift = euclidean_lift(Vector<double>(x.data(), x.data() + x.size()));
  return b.rho * Eigen::Map<const VectorXd>(lift.data(), static_cast<Eigen::Index>(lift.size()));
}

Eigen::MatrixXd moebius_metric(const Chart& chart, const std::vector<double>& p,
                               const MoebiusOptions& opts) {
  const Basic b = basic(chart, p, opts);
  return b.rho * b.rho * b.geometry.first;
}

InvariantReport analyze_point(const Chart& chart, const std::vector<double>& p,
                              const MoebiusOptions& opts) {
  const Fields f = compute_fields(chart, p, opts);
  const int n = f.n;
  InvariantReport r;
  r.n = n;
  r.ambient = f.sphere ? "sphere" : "euclidean";
  r.rho = f.rho.value();
  r.H = f.H.value();
  r.lambda = f.lambda;

  const MatrixXd g0 = values(f.g);
  const MatrixXd B0 = values(f.Bc);
  const MatrixXd A0 = values(f.Ac);
  const VectorXd C0 = values(f.Cc);
  const VectorXd Calt0 = values(f.Calt);
  const Gauge gauge = choose_frame(g0, B0, A0, opts.rel_gap);
  const MatrixXd& E = gauge.E;

  r.B = frame_components(B0, E);
  const MatrixXd A_raw = frame_components(A0, E);
  r.A = 0.5 * (A_raw + A_raw.transpose());
  r.C = E.transpose() * C0;
  r.C_alt = E.transpose() * Calt0;
  r.b = gauge.b;
  r.classes = gauge.classes;
  if (r.classes.count >= 3)
    r.M = moebius_curvature_ratios(std::vector<double>(r.b.data(), r.b.data() + n), opts.rel_gap);
  r.gauge_degenerate = gauge.degenerate;
  r.gauge = "E_i: g-orthonormal eigenbasis of B, b ascending; multiple classes diagonalize A";
  if (gauge.degenerate) r.gauge += "; A scalar on a multiple class, coordinate-projection basis";

  // Moving frame at p.
  MoebiusFrame& fr = r.frame;
  fr.basepoint = p;
  fr.rho = r.rho;
  fr.Y = values(f.Y);
  fr.N = values(f.N);
  fr.xi = values(f.xi);
  const int D = static_cast<int>(fr.Y.size());
  MatrixXd dY0(D, n);
  for (int a = 0; a < n; ++a) dY0.col(a) = values(f.dY[a]);
  fr.Yi = dY0 * E;
  fr.frame_pullback = E;
  fr.gauge_degenerate = gauge.degenerate;

  // Frame field: g-Gram-Schmidt of the constant vectors E_i(p).
  std::vector<TV> Ef;
  for (int i = 0; i < n; ++i) {
    TV v(E.col(i).data(), E.col(i).data() + n);
    for (int j = 0; j < i; ++j) {
      Taylor proj(0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) proj += f.g[a][b] * v[a] * Ef[j][b];
      v = axpy(-proj, Ef[j], v);
    }
    Taylor norm2(0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) norm2 += f.g[a][b] * v[a] * v[b];
    Ef.push_back(scaled(1.0 / sqrt(norm2), v));
  }

  // Connection data.
  ConnectionData& cd = r.connection;
  cd.n = n;
  cd.christoffel.resize(n * n * n);
  for (int i = 0; i < n * n * n; ++i) cd.christoffel[i] = f.gamma[i].value();
  auto G = [&](int a, int b, int c) { return cd.christoffel[(a * n + b) * n + c]; };
  // directional derivative E_k(phi) at p
  auto along = [&](const Taylor& phi, int k) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += E(c, k) * phi.partial(c).value();
    return s;
  };
  cd.omega.assign(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      VectorXd nabla(n);
      for (int a = 0; a < n; ++a) {
        double s = along(Ef[i][a], k);
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += G(a, b, c) * E(b, k) * E(c, i);
        nabla[a] = s;
      }
      for (int j = 0; j < n; ++j) cd.omega[(i * n + j) * n + k] = E.col(j).dot(g0 * nabla);
    }
  auto om = [&](int i, int j, int k) { return cd.omega[(i * n + j) * n + k]; };

  // Riemann tensor from the Christoffel field.
  std::vector<double> dG(n * n * n * n);  // [(e*n + a)*n + b)*n + c] = d_e Gamma^a_bc
  for (int e = 0; e < n; ++e)
    for (int i = 0; i < n * n * n; ++i) dG[e * n * n * n + i] = f.gamma[i].partial(e).value();
  auto dGa = [&](int e, int a, int b, int c) { return dG[((e * n + a) * n + b) * n + c]; };
  std::vector<double> Rup(n * n * n * n), Rlow(n * n * n * n);
  auto idx4 = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = dGa(c, a, d, b) - dGa(d, a, c, b);
          for (int e = 0; e < n; ++e) s += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          Rup[idx4(a, b, c, d)] = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += g0(a, e) * Rup[idx4(e, b, c, d)];
          Rlow[idx4(a, b, c, d)] = s;
        }
  // contract one slot at a time with E
  std::vector<double> tmp = Rlow;
  for (int slot = 0; slot < 4; ++slot) {
    std::vector<double> next(n * n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            std::array<int, 4> in{a, b, c, d};
            double s = 0.0;
            for (int e = 0; e < n; ++e) {
              std::array<int, 4> src = in;
              src[slot] = e;
              s += E(e, in[slot]) * tmp[idx4(src[0], src[1], src[2], src[3])];
            }
            next[idx4(a, b, c, d)] = s;
          }
    tmp = std::move(next);
  }
  cd.riemann = std::move(tmp);
  auto R = [&](int i, int j, int k, int l) { return cd.riemann[idx4(i, j, k, l)]; };
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum += R(i, j, i, j);
  cd.s = sum / (n * (n - 1));
  r.s = cd.s;

  // Frame-component fields and covariant derivatives.
  auto frame_field = [&](const TM& T, int i, int j) {
    Taylor s(0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += T[a][b] * Ef[i][a] * Ef[j][b];
    return s;
  };
  std::vector<double> DB(n * n * n), DA(n * n * n), DC(n * n);
  auto i3 = [n](int i, int j, int k) { return (i * n + j) * n + k; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Taylor Bij = frame_field(f.Bc, i, j);
      const Taylor Aij = 0.5 * (frame_field(f.Ac, i, j) + frame_field(f.Ac, j, i));
      for (int k = 0; k < n; ++k) {
        double sb = along(Bij, k), sa = along(Aij, k);
        for (int l = 0; l < n; ++l) {
          sb += r.B(i, l) * om(l, j, k) + r.B(l, j) * om(l, i, k);
          sa += r.A(i, l) * om(l, j, k) + r.A(l, j) * om(l, i, k);
        }
        DB[i3(i, j, k)] = sb;
        DA[i3(i, j, k)] = sa;
      }
    }
  for (int i = 0; i < n; ++i) {
    Taylor Ci(0.0);
    for (int a = 0; a < n; ++a) Ci += f.Cc[a] * Ef[i][a];
    for (int k = 0; k < n; ++k) {
      double s = along(Ci, k);
      for (int j = 0; j < n; ++j) s += r.C[j] * om(j, i, k);
      DC[i * n + k] = s;
    }
  }
  // Same derivative of B through coordinate Levi-Civita, as a route check.
  double route = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
              double nab = f.Bc[a][b].partial(c).value();
              for (int e = 0; e < n; ++e) nab -= G(e, c, a) * B0(e, b) + G(e, c, b) * B0(a, e);
              s += E(a, i) * E(b, j) * E(c, k) * nab;
            }
        route = std::max(route, std::abs(s - DB[i3(i, j, k)]));
      }

  const MatrixXd& B = r.B;
  const MatrixXd& A = r.A;
  const VectorXd& C = r.C;
  auto delta = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  auto& res = r.residuals;
  const MatrixXd eta = lorentz_metric(D);
  auto ip = [&](const VectorXd& a, const VectorXd& b) { return a.dot(eta * b); };
  res["frame.<Y,Y>"] = std::abs(ip(fr.Y, fr.Y));
  res["frame.<N,N>"] = std::abs(ip(fr.N, fr.N));
  res["frame.<N,Y>-1"] = std::abs(ip(fr.N, fr.Y) - 1.0);
  res["frame.<xi,xi>-1"] = std::abs(ip(fr.xi, fr.xi) - 1.0);
  res["frame.<xi,Y>"] = std::abs(ip(fr.xi, fr.Y));
  res["frame.<xi,N>"] = std::abs(ip(fr.xi, fr.N));
  res["frame.<xi,Y_i>"] = max_over(n, 1, [&](auto& v) { return ip(fr.xi, fr.Yi.col(v[0])); });
  res["frame.<Y_i,Y_j>-delta"] = max_over(
      n, 2, [&](auto& v) { return ip(fr.Yi.col(v[0]), fr.Yi.col(v[1])) - delta(v[0], v[1]); });
  res["frame.<Y_i,Y>"] = max_over(n, 1, [&](auto& v) { return ip(fr.Yi.col(v[0]), fr.Y); });
  res["frame.<Y_i,N>"] = max_over(n, 1, [&](auto& v) { return ip(fr.Yi.col(v[0]), fr.N); });

  res["equa1"] = max_over(n, 3, [&](auto& v) {
    const int i = v[0], j = v[1], k = v[2];
    return DA[i3(i, j, k)] - DA[i3(i, k, j)] - (B(i, k) * C[j] - B(i, j) * C[k]);
  });
  res["equa2"] = max_over(n, 2, [&](auto& v) {
    const int i = v[0], j = v[1];
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += B(i, k) * A(k, j) - B(j, k) * A(k, i);
    return DC[i * n + j] - DC[j * n + i] - s;
  });
  res["equa3.antisymmetry"] = max_over(n, 3, [&](auto& v) {
    const int i = v[0], j = v[1], k = v[2];
    return DB[i3(i, j, k)] - DB[i3(i, k, j)] - (delta(i, j) * C[k] - delta(i, k) * C[j]);
  });
  res["equa3.divergence"] = max_over(n, 1, [&](auto& v) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += DB[i3(v[0], j, j)];
    return s + (n - 1) * C[v[0]];
  });
  res["equa4"] = max_over(n, 4, [&](auto& v) {
    const int i = v[0], j = v[1], k = v[2], l = v[3];
    const double rhs = B(i, k) * B(j, l) - B(i, l) * B(j, k) + delta(i, k) * A(j, l) +
                       delta(j, l) * A(i, k) - delta(i, l) * A(j, k) - delta(j, k) * A(i, l);
    return R(i, j, k, l) - rhs;
  });
  res["equa6.trace_B"] = std::abs(B.trace());
  res["equa6.norm_B"] = std::abs(B.squaredNorm() - (n - 1.0) / n);
  res["equa6.trace_A"] = std::abs(A.trace() - (1.0 + n * n * r.s) / (2.0 * n));
  res["C_routes"] = (r.C - r.C_alt).cwiseAbs().maxCoeff();
  res["A_symmetry"] = max_abs(A_raw - A_raw.transpose());
  res["covariant_routes"] = route;
  res["omega_skew"] = max_over(n, 3, [&](auto& v) { return om(v[0], v[1], v[2]) + om(v[1], v[0], v[2]); });
  return r;
}

MoebiusFrame build_frame(const Chart& chart, const std::vector<double>& p,
                         const MoebiusOptions& opts) {
  return analyze_point(chart, p, opts).frame;
}

Eigen::MatrixXd tensor_B(const MoebiusFrame& frame, const PointGeometry& geometry) {
  const Eigen::MatrixXd e = frame.rho * frame.frame_pullback;
  const Eigen::MatrixXd traceless = geometry.second - geometry.mean_curvature * geometry.first;
  return (e.transpose() * traceless * e) / frame.rho;
}

Eigen::VectorXd form_C(const Chart& chart, const std::vector<double>& p,
                       const MoebiusOptions& opts) {
  return analyze_point(chart, p, opts).C;
}

Eigen::MatrixXd tensor_A(const Chart& chart, const std::vector<double>& p,
                         const MoebiusOptions& opts) {
  return analyze_point(chart, p, opts).A;
}

ConnectionData connection_and_curvature(const Chart& chart, const std::vector<double>& p,
                                        const MoebiusOptions& opts) {
  return analyze_point(chart, p, opts).connection;
}

std::map<std::string, double> integrability_residuals(const Chart& chart,
                                                       const std::vector<double>& p,
                                                       const MoebiusOptions& opts) {
  return analyze_point(chart, p, opts).residuals;
}

MoebiusCurvatures moebius_principal_curvatures(const Eigen::MatrixXd& B, double rel_gap) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()),
                                                    Eigen::EigenvaluesOnly);
  MoebiusCurvatures out;
  out.values = es.eigenvalues();
  out.classes = group_distinct(
      std::vector<double>(out.values.data(), out.values.data() + out.values.size()), rel_gap);
  return out;
}

std::vector<CurvatureRatio> moebius_curvature_ratios(const std::vector<double>& sorted,
                                                     double rel_gap) {
  const DistinctClasses cls = group_distinct(sorted, rel_gap);
  if (cls.count < 3)
    throw Error(ErrorCode::TooFewCurvatures,
                "curvature ratios are undefined for fewer than three distinct curvatures");
  const std::vector<double>& v = cls.representatives;
  std::vector<CurvatureRatio> out;
  for (int i = 0; i < cls.count; ++i)
    for (int j = 0; j < cls.count; ++j)
      for (int k = 0; k < cls.count; ++k) {
        if (i == j || j == k || i == k) continue;
        out.push_back({i + 1, j + 1, k + 1, (v[i] - v[j]) / (v[i] - v[k])});
      }
  return out;
}

}  // namespace moebius_lab
