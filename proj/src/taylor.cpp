#include "moebius_lab/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace moebius_lab {

namespace {

void enumerate(int nvars, int degree, int var, std::vector<int>& current,
               std::vector<int>& out) {
  if (var == nvars - 1) {
    current[var] = degree;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int k = degree; k >= 0; --k) {
    current[var] = k;
    enumerate(nvars, degree - k, var + 1, current, out);
  }
}

}  // namespace

TaylorSpace::TaylorSpace(int nvars, int max_order) : nvars_(nvars), max_order_(max_order) {
  if (nvars < 1 || max_order < 0) throw std::invalid_argument("TaylorSpace: bad dimensions");
  std::vector<int> current(nvars, 0);
  prefix_.push_back(0);
  for (int d = 0; d <= max_order; ++d) {
    enumerate(nvars, d, 0, current, exps_);
    prefix_.push_back(exps_.size() / nvars);
  }
  const std::size_t m = exps_.size() / nvars;
  degree_.resize(m);
  for (int d = 0; d <= max_order; ++d)
    for (std::size_t i = prefix_[d]; i < prefix_[d + 1]; ++i) degree_[i] = d;

  std::map<std::vector<int>, int> lookup;
  for (std::size_t i = 0; i < m; ++i)
    lookup.emplace(std::vector<int>(exps_.begin() + i * nvars, exps_.begin() + (i + 1) * nvars),
                   static_cast<int>(i));

  raise_.assign(m * nvars, -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (int v = 0; v < nvars; ++v) {
      std::vector<int> e(exps_.begin() + i * nvars, exps_.begin() + (i + 1) * nvars);
      ++e[v];
      auto it = lookup.find(e);
      if (it != lookup.end()) raise_[i * nvars + v] = it->second;
    }
  }
  product_.assign(m * m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (degree_[i] + degree_[j] > max_order) continue;
      std::vector<int> e(nvars);
      for (int v = 0; v < nvars; ++v) e[v] = exps_[i * nvars + v] + exps_[j * nvars + v];
      product_[i * m + j] = lookup.at(e);
    }
  }
}

std::shared_ptr<const TaylorSpace> TaylorSpace::get(int nvars, int max_order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const TaylorSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, max_order}];
  if (!slot) slot = std::make_shared<const TaylorSpace>(nvars, max_order);
  return slot;
}

std::size_t TaylorSpace::prefix(int d) const {
  if (d < 0) return 0;
  return prefix_[std::min(d, max_order_) + 1];
}

std::span<const int> TaylorSpace::exponent(std::size_t i) const {
  return {exps_.data() + i * nvars_, static_cast<std::size_t>(nvars_)};
}

int TaylorSpace::index_of(std::span<const int> alpha) const {
  int deg = 0;
  for (int a : alpha) deg += a;
  if (deg > max_order_) return -1;
  for (std::size_t i = prefix_[deg]; i < prefix_[deg + 1]; ++i)
    if (std::equal(alpha.begin(), alpha.end(), exps_.begin() + i * nvars_)) return static_cast<int>(i);
  return -1;
}

Taylor::Taylor(double value) : coeffs_{value} {}

Taylor::Taylor(std::shared_ptr<const TaylorSpace> space, int order)
    : space_(std::move(space)), order_(std::min(order, space_->max_order())) {
  coeffs_.assign(space_->prefix(order_), 0.0);
}

Taylor Taylor::variable(std::shared_ptr<const TaylorSpace> space, int var, double at) {
  const int order = space->max_order();
  Taylor t(std::move(space), order);
  t.coeffs_[0] = at;
  if (order >= 1) t.coeffs_[1 + var] = 1.0;
  return t;
}

std::size_t Taylor::active_size() const { return coeffs_.size(); }

Taylor Taylor::partial(int var) const {
  if (is_constant()) return Taylor(0.0);
  Taylor out(space_, std::max(order_ - 1, 0));
  if (order_ == 0) {
    // derivative information is exhausted; keep a valid-order marker of -1 semantics
    // by returning an empty order-0 value. Callers never rely on it.
    out.coeffs_[0] = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    const int j = space_->raise(i, var);
    out.coeffs_[i] = (space_->exponent(i)[var] + 1) * coeffs_[j];
  }
  return out;
}

double Taylor::derivative(std::span<const int> alpha) const {
  int deg = 0;
  double factorial = 1.0;
  for (int a : alpha) {
    deg += a;
    for (int k = 2; k <= a; ++k) factorial *= k;
  }
  if (deg == 0) return coeffs_[0];
  if (is_constant()) return 0.0;
  if (deg > order_) throw std::out_of_range("Taylor::derivative: order exceeds expansion");
  return factorial * coeffs_[space_->index_of(alpha)];
}

Taylor Taylor::truncated(int order) const {
  if (is_constant() || order >= order_) return *this;
  Taylor out(*this);
  out.order_ = std::max(order, 0);
  out.coeffs_.resize(space_->prefix(out.order_));
  return out;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  if (o.is_constant()) {
    coeffs_[0] += o.coeffs_[0];
    return *this;
  }
  if (is_constant()) {
    const double c = coeffs_[0];
    *this = o;
    coeffs_[0] += c;
    return *this;
  }
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  if (o.is_constant()) {
    coeffs_[0] -= o.coeffs_[0];
    return *this;
  }
  if (is_constant()) {
    const double c = coeffs_[0];
    *this = -o;
    coeffs_[0] += c;
    return *this;
  }
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  if (a.is_constant()) return b * a.coeffs_[0];
  if (b.is_constant()) return a * b.coeffs_[0];
  const int order = std::min(a.order_, b.order_);
  Taylor out(a.space_, order);
  const TaylorSpace& sp = *a.space_;
  const double* ac = a.coeffs_.data();
  const double* bc = b.coeffs_.data();
  double* oc = out.coeffs_.data();
  for (std::size_t i = 0; i < sp.prefix(order); ++i) {
    const double ai = ac[i];
    if (ai == 0.0) continue;
    const std::size_t jmax = sp.prefix(order - sp.degree(i));
    for (std::size_t j = 0; j < jmax; ++j) oc[sp.product(i, j)] += ai * bc[j];
  }
  return out;
}

Taylor& Taylor::operator*=(const Taylor& o) { return *this = *this * o; }
Taylor& Taylor::operator/=(const Taylor& o) { return *this = *this * inverse(o); }

Taylor& Taylor::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Taylor& Taylor::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Taylor Taylor::operator-() const {
  Taylor out(*this);
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
Taylor operator/(const Taylor& a, const Taylor& b) { return a * inverse(b); }
Taylor operator+(Taylor a, double b) { return a += b; }
Taylor operator+(double a, Taylor b) { return b += a; }
Taylor operator-(Taylor a, double b) { return a += -b; }
Taylor operator-(double a, const Taylor& b) { return (-b) + a; }
Taylor operator*(Taylor a, double b) { return a *= b; }
Taylor operator*(double a, Taylor b) { return b *= a; }
Taylor operator/(Taylor a, double b) { return a *= 1.0 / b; }
Taylor operator/(double a, const Taylor& b) { return inverse(b) * a; }

Taylor compose(const Taylor& a, std::span<const double> scaled_derivs) {
  if (a.is_constant()) return Taylor(scaled_derivs[0]);
  Taylor nil(a);
  nil.coeffs_[0] = 0.0;
  const int K = std::min<int>(a.order_, static_cast<int>(scaled_derivs.size()) - 1);
  Taylor r(a.space_, a.order_);
  r.coeffs_[0] = scaled_derivs[K];
  for (int k = K - 1; k >= 0; --k) {
    r = r * nil;
    r.coeffs_[0] += scaled_derivs[k];
  }
  return r;
}

namespace {

int order_of(const Taylor& a) {
  return a.is_constant() ? 0 : std::min(a.order(), a.space()->max_order());
}

// Scales raw derivatives f^(k) by 1/k! in place.
std::vector<double> scale_factorial(std::vector<double> d) {
  double f = 1.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k > 1) f *= static_cast<double>(k);
    d[k] /= f;
  }
  return d;
}

}  // namespace

Taylor pow(const Taylor& a, double exponent) {
  const double a0 = a.value();
  const int K = order_of(a);
  std::vector<double> d(K + 1);
  double falling = 1.0;
  for (int k = 0; k <= K; ++k) {
    d[k] = falling * std::pow(a0, exponent - k);
    falling *= exponent - k;
  }
  return compose(a, scale_factorial(std::move(d)));
}

Taylor sqrt(const Taylor& a) {
  if (!(a.value() > 0.0) && !a.is_constant())
    throw std::domain_error("Taylor sqrt: expansion point must be positive");
  if (a.is_constant()) return Taylor(std::sqrt(a.value()));
  return pow(a, 0.5);
}

Taylor inverse(const Taylor& a) {
  if (a.is_constant()) return Taylor(1.0 / a.value());
  if (a.value() == 0.0) throw std::domain_error("Taylor inverse: zero constant term");
  const double inv = 1.0 / a.value();
  const int K = order_of(a);
  // 1/(a0 + e) = sum (-1)^k e^k / a0^(k+1)
  std::vector<double> s(K + 1);
  double p = inv;
  for (int k = 0; k <= K; ++k) {
    s[k] = (k % 2 == 0 ? p : -p);
    p *= inv;
  }
  return compose(a, s);
}

Taylor exp(const Taylor& a) {
  const double e = std::exp(a.value());
  return compose(a, scale_factorial(std::vector<double>(order_of(a) + 1, e)));
}

Taylor log(const Taylor& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw std::domain_error("Taylor log: expansion point must be positive");
  const int K = order_of(a);
  std::vector<double> s(K + 1);
  s[0] = std::log(a0);
  double p = 1.0;
  for (int k = 1; k <= K; ++k) {
    p /= a0;
    s[k] = (k % 2 == 1 ? p : -p) / k;
  }
  return compose(a, s);
}

Taylor sin(const Taylor& a) {
  const double s0 = std::sin(a.value()), c0 = std::cos(a.value());
  const double cycle[4] = {s0, c0, -s0, -c0};
  std::vector<double> d(order_of(a) + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = cycle[k % 4];
  return compose(a, scale_factorial(std::move(d)));
}

Taylor cos(const Taylor& a) {
  const double s0 = std::sin(a.value()), c0 = std::cos(a.value());
  const double cycle[4] = {c0, -s0, -c0, s0};
  std::vector<double> d(order_of(a) + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = cycle[k % 4];
  return compose(a, scale_factorial(std::move(d)));
}

Taylor sinh(const Taylor& a) {
  const double s0 = std::sinh(a.value()), c0 = std::cosh(a.value());
  std::vector<double> d(order_of(a) + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (k % 2 == 0 ? s0 : c0);
  return compose(a, scale_factorial(std::move(d)));
}

Taylor cosh(const Taylor& a) {
  const double s0 = std::sinh(a.value()), c0 = std::cosh(a.value());
  std::vector<double> d(order_of(a) + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (k % 2 == 0 ? c0 : s0);
  return compose(a, scale_factorial(std::move(d)));
}

}  // namespace moebius_lab
