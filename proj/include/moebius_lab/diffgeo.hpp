#pragma once

// Parametrized hypersurface charts, their jets up to order three, and the
// classical extrinsic geometry at a parameter point.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "moebius_lab/dense.hpp"
#include "moebius_lab/taylor.hpp"

namespace moebius_lab {

enum class Ambient { Sphere, Euclidean, Hyperbolic };
enum class DerivativeMode { AnalyticJet, FiniteDifference };

const char* ambient_name(Ambient a);

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(const std::vector<double>& p, double radius = 0.0) const;
  std::vector<double> center() const;
};

/// A smooth hypersurface patch U -> ambient. Sphere charts map into
/// S^{n+1} in R^{n+2}, Euclidean charts into R^{n+1}, hyperbolic charts into
/// the upper hyperboloid in R^{n+2}_1.
///
/// Charts built with `Chart::generic` evaluate the same expression on
/// doubles and on Taylor expansions, so they carry exact jets of any order.
class Chart {
 public:
  using PointMap = std::function<Vector<double>(const Vector<double>&)>;
  using JetMap = std::function<Vector<Taylor>(const Vector<Taylor>&)>;

  Chart(std::string name, Ambient ambient, int dim, Box domain, PointMap point, JetMap jet = {});

  /// `f` is a generic callable accepting Vector<double> and Vector<Taylor>.
  template <class F>
  static Chart generic(std::string name, Ambient ambient, int dim, Box domain, F f) {
    return Chart(
        std::move(name), ambient, dim, std::move(domain),
        [f](const Vector<double>& p) { return f(p); },
        [f](const Vector<Taylor>& p) { return f(p); });
  }

  const std::string& name() const { return name_; }
  Ambient ambient() const { return ambient_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_dim_; }
  const Box& domain() const { return domain_; }
  DerivativeMode mode() const { return mode_; }
  bool has_jets() const { return static_cast<bool>(jet_); }

  Vector<double> operator()(const Vector<double>& p) const { return point_(p); }
  /// Taylor expansion of the map at p to `order` (analytic charts only).
  Vector<Taylor> expand(const Vector<double>& p, int order) const;
  /// Applies the map to already-expanded parameters (analytic charts only).
  Vector<Taylor> apply(const Vector<Taylor>& p) const;

  /// The same chart evaluated with finite differences only.
  Chart with_mode(DerivativeMode mode) const;
  /// The sphere-ambient image: sigma o f (Euclidean), tau o f (hyperbolic),
  /// or the chart itself.
  Chart on_sphere() const;
  /// Psi(T) o on_sphere() for an orthochronous Lorentz matrix T.
  Chart transformed(const Eigen::MatrixXd& t) const;
  /// x -> k x for Euclidean charts.
  Chart scaled(double k) const;

 private:
  std::string name_;
  Ambient ambient_;
  int dim_;
  int ambient_dim_;
  Box domain_;
  DerivativeMode mode_;
  PointMap point_;
  JetMap jet_;
};

/// Value and partial derivatives up to order three (symmetric in the lower
/// indices).
struct JetPoint {
  int dim = 0;
  int order = 0;
  Eigen::VectorXd value;
  std::vector<Eigen::VectorXd> d1;  // [a]
  std::vector<Eigen::VectorXd> d2;  // [a*dim + b]
  std::vector<Eigen::VectorXd> d3;  // [(a*dim + b)*dim + c]

  const Eigen::VectorXd& first(int a) const { return d1[a]; }
  const Eigen::VectorXd& second(int a, int b) const { return d2[a * dim + b]; }
  const Eigen::VectorXd& third(int a, int b, int c) const { return d3[(a * dim + b) * dim + c]; }
};

/// Finite-difference step for derivatives of order k at p:
/// eps^(1/(4+k)) * max(1, |p|), the balance point of the Richardson-improved
/// O(h^4) truncation error against eps/h^k round-off.
double fd_step(int k, const std::vector<double>& p);

JetPoint eval_jet(const Chart& chart, const std::vector<double>& p, int order);
JetPoint eval_jet(const Chart& chart, const std::vector<double>& p, int order, DerivativeMode mode);

struct PrincipalDecomposition {
  Eigen::VectorXd curvatures;  ///< ascending
  Eigen::MatrixXd frame;       ///< columns: I-orthonormal principal directions (coordinates)
};

/// Solves II v = lambda I v by congruence with the Cholesky factor of I.
PrincipalDecomposition principal_decomposition(const Eigen::MatrixXd& first,
                                               const Eigen::MatrixXd& second);

struct DistinctClasses {
  int count = 0;                       ///< r
  int simple = 0;                      ///< number of multiplicity-one classes
  std::vector<int> multiplicities;     ///< per class, in ascending value order
  std::vector<double> representatives; ///< class means
  std::vector<int> class_of;           ///< class index per input entry
};

inline constexpr double kDefaultRelGap = 1e-5;

/// Groups a sorted list into maximal runs whose consecutive gaps, relative to
/// max|lambda|, stay below `rel_gap`.
DistinctClasses group_distinct(const std::vector<double>& sorted, double rel_gap = kDefaultRelGap);

struct PointGeometry {
  Ambient ambient = Ambient::Sphere;  ///< Sphere or Euclidean (hyperbolic is pushed through tau)
  Eigen::VectorXd position;
  Eigen::MatrixXd tangents;  ///< column a = d_a x
  Eigen::MatrixXd first;     ///< I
  Eigen::MatrixXd second;    ///< II, with respect to `normal`
  Eigen::VectorXd normal;
  double mean_curvature = 0.0;  ///< (1/n) trace(I^{-1} II)
  Eigen::VectorXd principal_curvatures;
  Eigen::MatrixXd principal_frame;
};

/// Unit normal orthogonal to the tangents (and to x for the sphere), oriented
/// so that (d_1 x, ..., d_n x, normal[, x]) is a positive ambient frame.
Eigen::VectorXd oriented_normal(const Eigen::MatrixXd& tangents, const Eigen::VectorXd* position);

PointGeometry fundamental_forms(const JetPoint& jet, Ambient ambient);
PointGeometry fundamental_forms(const Chart& chart, const std::vector<double>& p);

}  // namespace moebius_lab
