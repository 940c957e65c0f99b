#include "moebius_lab/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/moebius.hpp"

namespace moebius_lab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::numbers::pi;

/// Hyperspherical point with angles a[off .. off+k): x_i = cos a_i prod_{j<i} sin a_j.
template <class S>
void append_hypersphere(const Vector<S>& a, int off, int k, double radius, Vector<S>& out) {
  using std::cos, std::sin;
  S prod(radius);
  for (int i = 0; i < k; ++i) {
    out.push_back(prod * cos(a[off + i]));
    prod = prod * sin(a[off + i]);
  }
  out.push_back(prod);
}

void append_sphere_box(int k, Box& box, std::vector<double>& base) {
  for (int i = 0; i < k; ++i) {
    const bool last = i == k - 1;
    box.lo.push_back(last ? -3.0 : 0.4);
    box.hi.push_back(last ? 3.0 : pi - 0.4);
    base.push_back(last ? 0.0 : pi / 2);
  }
}

std::vector<double> slice(const std::vector<double>& v, int off, int len) {
  return {v.begin() + off, v.begin() + off + len};
}

/// R(a) R(a0)^t: carries the hyperspherical point at a0 to the one at a.
MatrixXd relative_rotation(const std::vector<double>& a, const std::vector<double>& a0) {
  return hyperspherical_rotation(a) * hyperspherical_rotation(a0).transpose();
}

MatrixXd block_diag(const std::vector<MatrixXd>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  MatrixXd out = MatrixXd::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

/// Moebius principal curvatures b_i = (lambda_i - H)/rho from classical ones.
std::vector<double> expected_b(std::vector<double> lambda) {
  const int n = static_cast<int>(lambda.size());
  double h = 0.0, norm2 = 0.0;
  for (double l : lambda) {
    h += l / n;
    norm2 += l * l;
  }
  const double rho = std::sqrt(n / (n - 1.0) * (norm2 - n * h * h));
  for (double& l : lambda) l = (l - h) / rho;
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

std::vector<double> repeat(double value, int count, std::vector<double> into = {}) {
  into.insert(into.end(), count, value);
  return into;
}

void check(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, message);
}

void finish(ExampleFamily& fam) {
  fam.base_Y = moebius_position(fam.chart, fam.base_point);
}

}  // namespace

const char* orbit_tag_name(OrbitTag tag) {
  switch (tag) {
    case OrbitTag::FixedPoint: return "FixedPoint";
    case OrbitTag::TotallyGeodesic: return "TotallyGeodesic";
    case OrbitTag::Horosphere: return "Horosphere";
    case OrbitTag::Undetermined: return "Undetermined";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd similarity_matrix(double lambda, const Eigen::MatrixXd& rotation,
                                  const Eigen::VectorXd& translation) {
  const Eigen::Index d = rotation.rows();
  if (rotation.cols() != d || translation.size() != d)
    throw Error(ErrorCode::DimensionMismatch, "similarity_matrix: shapes");
  if (!(lambda > 0)) throw Error(ErrorCode::InvalidParameter, "similarity_matrix: lambda <= 0");
  const double b2 = translation.squaredNorm();
  MatrixXd t(d + 2, d + 2);
  t(0, 0) = (1 + b2) / (2 * lambda) + lambda / 2;
  t(0, 1) = (1 + b2) / (2 * lambda) - lambda / 2;
  t(1, 0) = (1 - b2) / (2 * lambda) - lambda / 2;
  t(1, 1) = (1 - b2) / (2 * lambda) + lambda / 2;
  const VectorXd bR = rotation.transpose() * translation;
  t.block(0, 2, 1, d) = bR.transpose();
  t.block(1, 2, 1, d) = -bR.transpose();
  t.block(2, 0, d, 1) = translation / lambda;
  t.block(2, 1, d, 1) = translation / lambda;
  t.block(2, 2, d, d) = rotation;
  return t;
}

Eigen::MatrixXd g_r(const Eigen::VectorXd& u, const Eigen::MatrixXd& q) {
  const Eigen::Index m = u.size(), k = q.rows();
  const double h = 0.5 * u.squaredNorm();
  MatrixXd t = MatrixXd::Zero(m + 2 + k, m + 2 + k);
  t(0, 0) = 1 + h;
  t(0, 1) = -h;
  t(1, 0) = h;
  t(1, 1) = 1 - h;
  t.block(0, 2, 1, m) = u.transpose();
  t.block(1, 2, 1, m) = u.transpose();
  t.block(2, 0, m, 1) = u;
  t.block(2, 1, m, 1) = -u;
  t.block(2, 2, m, m) = MatrixXd::Identity(m, m);
  t.block(m + 2, m + 2, k, k) = q;
  return t;
}

Eigen::MatrixXd g_h(const Eigen::MatrixXd& boost, const Eigen::MatrixXd& q) {
  return block_diag({boost, MatrixXd::Identity(1, 1), q});
}

Eigen::MatrixXd g_c(const Eigen::MatrixXd& lorentz_block, const Eigen::MatrixXd& base) {
  return block_diag({lorentz_block, base});
}

Eigen::MatrixXd g_e(double c, double s, const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size() + 1;
  const double e = std::exp(c * s);
  const double y2 = y.squaredNorm();
  MatrixXd t = MatrixXd::Zero(n + 3, n + 3);
  t(0, 0) = (1 + y2 + e * e) / (2 * e);
  t(0, 1) = (1 + y2 - e * e) / (2 * e);
  t(1, 0) = (1 - y2 - e * e) / (2 * e);
  t(1, 1) = (1 - y2 + e * e) / (2 * e);
  t(2, 2) = std::cos(s);
  t(2, 3) = -std::sin(s);
  t(3, 2) = std::sin(s);
  t(3, 3) = std::cos(s);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    t(0, 4 + i) = y[i];
    t(1, 4 + i) = -y[i];
    t(4 + i, 0) = y[i] / e;
    t(4 + i, 1) = y[i] / e;
    t(4 + i, 4 + i) = 1.0;
  }
  return t;
}

Eigen::MatrixXd givens(int dim, int i, double angle) {
  MatrixXd g = MatrixXd::Identity(dim, dim);
  g(i, i) = g(i + 1, i + 1) = std::cos(angle);
  g(i, i + 1) = -std::sin(angle);
  g(i + 1, i) = std::sin(angle);
  return g;
}

Eigen::MatrixXd hyperspherical_rotation(const std::vector<double>& angles) {
  const int k = static_cast<int>(angles.size());
  MatrixXd r = MatrixXd::Identity(k + 1, k + 1);
  for (int i = 0; i < k; ++i) r = givens(k + 1, i, angles[i]) * r;
  return r;
}

// ---------------------------------------------------------------------------

ExampleFamily make_torus(int n, int k, double r) {
  check(n >= 2 && k >= 1 && k <= n - 1, "torus: need 1 <= k <= n-1");
  check(r > 0 && r < 1, "torus: need 0 < r < 1");
  const double s = std::sqrt(1 - r * r);
  Box box;
  std::vector<double> base;
  append_sphere_box(k, box, base);
  append_sphere_box(n - k, box, base);
  std::ostringstream name;
  name << "torus:n=" << n << ":k=" << k << ":r=" << r;
  Chart chart = Chart::generic(name.str(), Ambient::Sphere, n, box, [n, k, r, s](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    Vector<S> x;
    append_hypersphere(p, 0, k, r, x);
    append_hypersphere(p, k, n - k, s, x);
    return x;
  });
  ExampleFamily fam{name.str(), chart, {}, base, {}, {}};
  fam.group_element = [n, k, base](const std::vector<double>& q) {
    return LorentzMatrix(block_diag({MatrixXd::Identity(1, 1),
                                     relative_rotation(slice(q, 0, k), slice(base, 0, k)),
                                     relative_rotation(slice(q, k, n - k), slice(base, k, n - k))}));
  };
  fam.expected.r = 2;
  fam.expected.C_zero = true;
  fam.expected.orbit_case = OrbitTag::FixedPoint;
  fam.expected.b = expected_b(repeat(-r / s, n - k, repeat(s / r, k)));
  finish(fam);
  return fam;
}

ExampleFamily make_clifford_torus(int m, double r, int k) {
  check(m >= 2, "clifford: need m >= 2");
  ExampleFamily fam = make_torus(m, k, r);
  std::ostringstream name;
  name << "clifford:m=" << m << ":k=" << k << ":r=" << r;
  fam.name = name.str();
  return fam;
}

ExampleFamily make_cylinder(int n, int k) {
  check(n >= 2 && k >= 1 && k <= n - 1, "cylinder: need 1 <= k <= n-1");
  const int m = n - k;
  Box box;
  std::vector<double> base;
  for (int i = 0; i < m; ++i) {
    box.lo.push_back(-2.0);
    box.hi.push_back(2.0);
    base.push_back(0.0);
  }
  append_sphere_box(k, box, base);
  std::ostringstream name;
  name << "cylinder:n=" << n << ":k=" << k;
  Chart chart = Chart::generic(name.str(), Ambient::Euclidean, n, box, [m, k](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    Vector<S> f(p.begin(), p.begin() + m);
    append_hypersphere(p, m, k, 1.0, f);
    return f;
  });
  ExampleFamily fam{name.str(), chart, {}, base, {}, {}};
  fam.group_element = [m, k, n, base](const std::vector<double>& q) {
    VectorXd b = VectorXd::Zero(n + 1);
    for (int i = 0; i < m; ++i) b[i] = q[i] - base[i];
    const MatrixXd rot = block_diag(
        {MatrixXd::Identity(m, m), relative_rotation(slice(q, m, k), slice(base, m, k))});
    return LorentzMatrix(similarity_matrix(1.0, rot, b));
  };
  fam.expected.r = 2;
  fam.expected.C_zero = true;
  fam.expected.orbit_case = OrbitTag::Horosphere;
  fam.expected.b = expected_b(repeat(0.0, m, repeat(1.0, k)));
  finish(fam);
  return fam;
}

ExampleFamily make_hyperbolic_cylinder(int n, int k, double r) {
  check(n >= 2 && k >= 1 && k <= n - 1, "hypcyl: need 1 <= k <= n-1");
  check(r > 0, "hypcyl: need r > 0");
  const int m = n - k;
  const double big = std::sqrt(1 + r * r);
  Box box;
  std::vector<double> base;
  for (int i = 0; i < m; ++i) {
    box.lo.push_back(-1.5);
    box.hi.push_back(1.5);
    base.push_back(0.0);
  }
  append_sphere_box(k, box, base);
  std::ostringstream name;
  name << "hypcyl:n=" << n << ":k=" << k << ":r=" << r;
  Chart chart =
      Chart::generic(name.str(), Ambient::Hyperbolic, n, box, [m, k, r, big](const auto& p) {
        using std::sqrt;
        using S = std::decay_t<decltype(p[0])>;
        S v2(1.0);
        for (int i = 0; i < m; ++i) v2 += p[i] * p[i];
        Vector<S> y{big * sqrt(v2)};
        for (int i = 0; i < m; ++i) y.push_back(big * p[i]);
        append_hypersphere(p, m, k, r, y);
        return y;
      });
  ExampleFamily fam{name.str(), chart, {}, base, {}, {}};
  // Y is proportional to (y_0, 1, y_1, ..., y_{n+1}): the boost acts on slots
  // {0, 2, ..., m+1}, slot 1 is fixed and the sphere block rotates.
  fam.group_element = [m, k, n, base](const std::vector<double>& q) {
    const VectorXd v = Eigen::Map<const VectorXd>(q.data(), m);
    const VectorXd v0 = Eigen::Map<const VectorXd>(base.data(), m);
    const LorentzMatrix boost =
        LorentzMatrix(boost_to(v)) * LorentzMatrix(boost_to(v0)).inverse();
    MatrixXd t = MatrixXd::Zero(n + 3, n + 3);
    std::vector<int> slots{0};
    for (int i = 0; i < m; ++i) slots.push_back(2 + i);
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) t(slots[i], slots[j]) = boost.matrix()(i, j);
    t(1, 1) = 1.0;
    t.block(m + 2, m + 2, k + 1, k + 1) = relative_rotation(slice(q, m, k), slice(base, m, k));
    return LorentzMatrix(t);
  };
  fam.expected.r = 2;
  fam.expected.C_zero = true;
  fam.expected.orbit_case = OrbitTag::TotallyGeodesic;
  fam.expected.b = expected_b(repeat(r / big, m, repeat(big / r, k)));
  finish(fam);
  return fam;
}

ExampleFamily make_cone(const ExampleFamily& base, int n) {
  const Chart& u = base.chart;
  if (u.ambient() != Ambient::Sphere)
    throw Error(ErrorCode::DimensionMismatch, "cone: base must be a sphere-ambient family");
  const int m = u.dim();
  if (m >= n) throw Error(ErrorCode::DimensionMismatch, "cone: need base dimension m < n");
  const int ny = n - m - 1;
  Box box;
  std::vector<double> p0;
  box.lo.push_back(0.5);
  box.hi.push_back(3.0);
  p0.push_back(1.0);
  for (int i = 0; i < ny; ++i) {
    box.lo.push_back(-2.0);
    box.hi.push_back(2.0);
    p0.push_back(0.0);
  }
  for (int i = 0; i < m; ++i) {
    box.lo.push_back(u.domain().lo[i]);
    box.hi.push_back(u.domain().hi[i]);
  }
  p0.insert(p0.end(), base.base_point.begin(), base.base_point.end());
  const std::string name = "cone:" + base.name + ":n=" + std::to_string(n);
  Chart::PointMap point = [u, m, ny](const Vector<double>& p) {
    Vector<double> f(p.begin() + 1, p.begin() + 1 + ny);
    const Vector<double> x = u(Vector<double>(p.begin() + 1 + ny, p.end()));
    for (double v : x) f.push_back(p[0] * v);
    return f;
  };
  Chart::JetMap jet = [u, m, ny](const Vector<Taylor>& p) {
    Vector<Taylor> f(p.begin() + 1, p.begin() + 1 + ny);
    const Vector<Taylor> x = u.apply(Vector<Taylor>(p.begin() + 1 + ny, p.end()));
    for (const Taylor& v : x) f.push_back(p[0] * v);
    return f;
  };
  Chart chart(name, Ambient::Euclidean, n, box, point, u.has_jets() ? jet : Chart::JetMap{});
  ExampleFamily fam{name, chart, {}, p0, {}, {}};
  const auto base_group = base.group_element;
  fam.group_element = [base_group, m, ny, n, p0](const std::vector<double>& q) {
    const double lambda = q[0] / p0[0];
    VectorXd b = VectorXd::Zero(n + 1);
    for (int i = 0; i < ny; ++i) b[i] = q[1 + i] - lambda * p0[1 + i];
    const MatrixXd g = base_group(std::vector<double>(q.begin() + 1 + ny, q.end())).matrix();
    const MatrixXd rot = block_diag({MatrixXd::Identity(ny, ny), g.bottomRightCorner(m + 2, m + 2)});
    return LorentzMatrix(similarity_matrix(lambda, rot, b));
  };
  // Classical curvatures at t = 1: zeros along the ray and y directions, the
  // base curvatures otherwise.
  std::vector<double> lambda = repeat(0.0, n - m);
  {
    const PointGeometry pg = fundamental_forms(u, base.base_point);
    for (int i = 0; i < m; ++i) lambda.push_back(pg.principal_curvatures[i]);
  }
  const DistinctClasses cls = group_distinct(expected_b(lambda));
  fam.expected.r = cls.count;
  fam.expected.C_zero = true;
  fam.expected.orbit_case = OrbitTag::TotallyGeodesic;
  fam.expected.b = expected_b(lambda);
  finish(fam);
  return fam;
}

ExampleFamily make_log_spiral_cylinder(int n, double c) {
  check(n >= 2, "logspiral: need n >= 2");
  check(c > 0, "logspiral: need c > 0");
  Box box{std::vector<double>(n, -2.0), std::vector<double>(n, 2.0)};
  std::ostringstream name;
  name << "logspiral:n=" << n << ":c=" << c;
  Chart chart = Chart::generic(name.str(), Ambient::Euclidean, n, box, [n, c](const auto& p) {
    using std::cos, std::exp, std::sin;
    using S = std::decay_t<decltype(p[0])>;
    const S e = exp(c * p[0]);
    Vector<S> f{e * cos(p[0]), e * sin(p[0])};
    for (int i = 1; i < n; ++i) f.push_back(p[i]);
    return f;
  });
  ExampleFamily fam{name.str(), chart, {}, std::vector<double>(n, 0.0), {}, {}};
  fam.group_element = [c, n](const std::vector<double>& q) {
    return LorentzMatrix(g_e(c, q[0], Eigen::Map<const VectorXd>(q.data() + 1, n - 1)));
  };
  fam.expected.r = 2;
  fam.expected.C_zero = false;
  fam.expected.orbit_case = OrbitTag::Horosphere;
  fam.expected.b = expected_b(repeat(0.0, n - 1, {1.0}));
  finish(fam);
  return fam;
}

// ---------------------------------------------------------------------------

namespace {

std::map<std::string, double> parse_keys(const std::vector<std::string>& tokens, std::size_t from,
                                         const std::string& selector) {
  std::map<std::string, double> keys;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidParameter, "selector '" + selector + "': bad token '" +
                                                   tokens[i] + "'");
    const std::string key = tokens[i].substr(0, eq);
    const std::string value = tokens[i].substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty())
      throw Error(ErrorCode::InvalidParameter,
                  "selector '" + selector + "': bad value for " + key);
    keys[key] = v;
  }
  return keys;
}

class Keys {
 public:
  Keys(std::map<std::string, double> keys, std::string selector)
      : keys_(std::move(keys)), selector_(std::move(selector)) {}

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto it = keys_.find(key);
    if (it == keys_.end()) {
      if (!fallback)
        throw Error(ErrorCode::InvalidParameter, "selector '" + selector_ + "': missing " + key);
      return *fallback;
    }
    const double v = it->second;
    keys_.erase(it);
    return v;
  }
  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    const double v = real(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
    if (v != std::floor(v))
      throw Error(ErrorCode::InvalidParameter,
                  "selector '" + selector_ + "': " + key + " must be an integer");
    return static_cast<int>(v);
  }
  void done() const {
    if (!keys_.empty())
      throw Error(ErrorCode::InvalidParameter,
                  "selector '" + selector_ + "': unknown key " + keys_.begin()->first);
  }

 private:
  std::map<std::string, double> keys_;
  std::string selector_;
};

}  // namespace

ExampleFamily make_family(const std::string& selector) {
  std::vector<std::string> tokens;
  std::stringstream ss(selector);
  std::string tok;
  while (std::getline(ss, tok, ':')) tokens.push_back(tok);
  if (tokens.empty()) throw Error(ErrorCode::UnknownFamily, "empty family selector");
  const std::string& kind = tokens[0];
  if (kind == "cone") {
    if (tokens.size() < 2 || tokens[1] != "clifford")
      throw Error(ErrorCode::UnknownFamily,
                  "selector '" + selector + "': cone base must be 'clifford'");
    Keys keys(parse_keys(tokens, 2, selector), selector);
    const int m = keys.integer("m", 2);
    const int n = keys.integer("n");
    const int k = keys.integer("k", 1);
    const double r = keys.real("r", std::sqrt(static_cast<double>(k) / m));
    keys.done();
    return make_cone(make_clifford_torus(m, r, k), n);
  }
  Keys keys(parse_keys(tokens, 1, selector), selector);
  ExampleFamily fam = [&]() -> ExampleFamily {
    if (kind == "torus") {
      const int n = keys.integer("n");
      const int k = keys.integer("k", 1);
      return make_torus(n, k, keys.real("r"));
    }
    if (kind == "clifford") {
      const int m = keys.integer("m");
      const int k = keys.integer("k", 1);
      return make_clifford_torus(m, keys.real("r", std::sqrt(static_cast<double>(k) / m)), k);
    }
    if (kind == "cylinder") {
      const int n = keys.integer("n");
      return make_cylinder(n, keys.integer("k", 1));
    }
    if (kind == "hypcyl") {
      const int n = keys.integer("n");
      const int k = keys.integer("k", 1);
      return make_hyperbolic_cylinder(n, k, keys.real("r", 1.0));
    }
    if (kind == "logspiral") {
      const int n = keys.integer("n");
      return make_log_spiral_cylinder(n, keys.real("c", 1.0));
    }
    throw Error(ErrorCode::UnknownFamily, "unknown family '" + kind + "'");
  }();
  keys.done();
  return fam;
}

std::vector<std::string> standard_selectors() {
  return {"torus:n=2:k=1:r=0.6",   "torus:n=3:k=1:r=0.6", "torus:n=3:k=2:r=0.6",
          "cylinder:n=2:k=1",      "cylinder:n=3:k=1",    "hypcyl:n=3:k=1:r=1",
          "cone:clifford:m=2:n=3", "logspiral:n=2:c=1",   "logspiral:n=3:c=1"};
}

}  // namespace moebius_lab
