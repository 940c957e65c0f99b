#include "moebius_lab/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/moebius.hpp"
#include "moebius_lab/sampling.hpp"

namespace moebius_lab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Real eigenvalue clusters of t; complex clusters are dropped.
std::vector<double> real_eigenvalue_clusters(const MatrixXd& t, double tol) {
  Eigen::EigenSolver<MatrixXd> es(t, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  std::vector<bool> used(ev.size(), false);
  std::vector<double> out;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    std::complex<double> sum = ev[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      if (used[j]) continue;
      const double scale = std::max({1.0, std::abs(ev[i]), std::abs(ev[j])});
      if (std::abs(ev[j] - ev[i]) <= tol * scale) {
        sum += ev[j];
        ++count;
        used[j] = true;
      }
    }
    const std::complex<double> mean = sum / static_cast<double>(count);
    if (std::abs(mean.imag()) <= tol * std::max(1.0, std::abs(mean))) out.push_back(mean.real());
  }
  return out;
}

// Orthonormal basis of {W c : (T - lambda) W c = 0}.
MatrixXd restricted_nullspace(const MatrixXd& t, double lambda, const MatrixXd& w) {
  const MatrixXd k = (t - lambda * MatrixXd::Identity(t.rows(), t.cols())) * w;
  Eigen::JacobiSVD<MatrixXd> svd(k, Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  const double threshold = 1e-8 * std::max(1.0, max_abs(t));
  std::vector<int> null_cols;
  for (int c = 0; c < w.cols(); ++c) {
    const double s = c < sv.size() ? sv[c] : 0.0;
    if (s <= threshold) null_cols.push_back(c);
  }
  MatrixXd out(w.rows(), static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t i = 0; i < null_cols.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = w * svd.matrixV().col(null_cols[i]);
  return out;
}

// Orthonormal basis of the column span, dropping directions below tol.
MatrixXd orthonormal_span(const MatrixXd& m, double tol = 1e-9) {
  if (m.cols() == 0) return m;
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
  const VectorXd& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv[rank] > tol * std::max(1.0, sv[0])) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Eigen-decomposition of the Lorentz form restricted to span(W).
Eigen::SelfAdjointEigenSolver<MatrixXd> restricted_form(const MatrixXd& w) {
  const MatrixXd gram = w.transpose() * lorentz_metric(static_cast<int>(w.rows())) * w;
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (gram + gram.transpose()));
}

constexpr double kFormTol = 1e-8;

enum class Signature { Lorentzian, Euclidean, Degenerate };

Signature signature(const MatrixXd& w) {
  const VectorXd ev = restricted_form(w).eigenvalues();
  int neg = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= kFormTol) return Signature::Degenerate;
    if (ev[i] < 0) ++neg;
  }
  if (neg == 0) return Signature::Euclidean;
  return neg == 1 ? Signature::Lorentzian : Signature::Degenerate;
}

// Lorentz-orthogonal complement of span(W).
MatrixXd lorentz_complement(const MatrixXd& w) {
  const MatrixXd a = w.transpose() * lorentz_metric(static_cast<int>(w.rows()));
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const int rank = static_cast<int>((svd.singularValues().array() > 1e-9).count());
  return svd.matrixV().rightCols(w.rows() - rank);
}

// Smallest subspace containing v that every element maps into itself.
MatrixXd invariant_closure(const GroupSample& gs, const VectorXd& v) {
  MatrixXd q = v.normalized();
  for (bool grew = true; grew;) {
    grew = false;
    for (const LorentzMatrix& t : gs.elements) {
      for (Eigen::Index c = 0; c < q.cols(); ++c) {
        VectorXd w = t.matrix() * q.col(c);
        const double before = w.norm();
        w -= q * (q.transpose() * w);
        w -= q * (q.transpose() * w);
        if (w.norm() > 1e-9 * std::max(1.0, before)) {
          q.conservativeResize(q.rows(), q.cols() + 1);
          q.col(q.cols() - 1) = w.normalized();
          grew = true;
        }
      }
    }
  }
  return q;
}

VectorXd timelike_vector(const MatrixXd& w) {
  const auto es = restricted_form(w);
  return w * es.eigenvectors().col(0);
}

}  // namespace

// ---------------------------------------------------------------------------

GroupSample GroupSample::from(std::vector<LorentzMatrix> elements) {
  if (elements.empty()) throw Error(ErrorCode::InvalidParameter, "group sample is empty");
  const int d = elements.front().dim();
  for (const LorentzMatrix& t : elements) {
    if (t.dim() != d) throw Error(ErrorCode::DimensionMismatch, "group sample: mixed sizes");
    if (!t.is_lorentz() || !t.is_orthochronous())
      throw Error(ErrorCode::InvalidParameter,
                  "group sample: element is not orthochronous Lorentz (scaled residual " +
                      std::to_string(t.membership().scaled_residual) + ")");
  }
  return GroupSample{std::move(elements), d};
}

GroupSample sample_family_group(const ExampleFamily& fam, std::size_t count, std::uint64_t seed) {
  if (!fam.group_element)
    throw Error(ErrorCode::MissingGroup, "family " + fam.name + " has no group map");
  std::vector<LorentzMatrix> elements;
  const Box& box = fam.chart.domain();
  for (const auto& q : halton_box(box.lo, box.hi, count, seed)) elements.push_back(fam.group_element(q));
  return GroupSample::from(std::move(elements));
}

Eigen::VectorXd projective_normalize(const Eigen::VectorXd& v) {
  VectorXd out = v.normalized();
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] != 0.0) {
      if (out[i] < 0) out = -out;
      break;
    }
  }
  return out;
}

double verify_homogeneity(
    const ExampleFamily& fam,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
  if (!fam.group_element)
    throw Error(ErrorCode::MissingGroup, "family " + fam.name + " has no group map");
  double worst = 0.0;
  for (const auto& [p, q] : pairs) {
    const VectorXd yp = moebius_position(fam.chart, p);
    const VectorXd yq = moebius_position(fam.chart, q);
    VectorXd moved = yp;
    if (p != q) moved = (fam.group_element(q) * fam.group_element(p).inverse()) * yp;
    worst = std::max(worst, (projective_normalize(moved) - projective_normalize(yq)).norm());
  }
  return worst;
}

double verify_homogeneity(const ExampleFamily& fam, std::size_t pairs, std::uint64_t seed) {
  const Box& box = fam.chart.domain();
  const int n = fam.chart.dim();
  std::vector<double> lo = box.lo, hi = box.hi;
  lo.insert(lo.end(), box.lo.begin(), box.lo.end());
  hi.insert(hi.end(), box.hi.begin(), box.hi.end());
  std::vector<std::pair<std::vector<double>, std::vector<double>>> list;
  for (const auto& pq : halton_box(lo, hi, pairs, seed))
    list.emplace_back(std::vector<double>(pq.begin(), pq.begin() + n),
                      std::vector<double>(pq.begin() + n, pq.end()));
  return verify_homogeneity(fam, list);
}

// ---------------------------------------------------------------------------

std::vector<CommonEigenspace> common_eigenspaces(const GroupSample& gs, double cluster_tol) {
  const int d = gs.dim_ambient;
  std::vector<CommonEigenspace> spaces{{MatrixXd::Identity(d, d), {}}};
  for (const LorentzMatrix& t : gs.elements) {
    const std::vector<double> lambdas = real_eigenvalue_clusters(t.matrix(), cluster_tol);
    std::vector<CommonEigenspace> next;
    for (const CommonEigenspace& s : spaces) {
      for (double lambda : lambdas) {
        const MatrixXd w = restricted_nullspace(t.matrix(), lambda, s.basis);
        if (w.cols() == 0) continue;
        CommonEigenspace child{w, s.eigenvalues};
        child.eigenvalues.push_back(lambda);
        next.push_back(std::move(child));
      }
    }
    spaces = std::move(next);
    if (spaces.empty()) break;
  }
  // Report the eigenvalue actually realized on each space.
  for (CommonEigenspace& s : spaces) {
    const VectorXd v = s.basis.col(0);
    for (std::size_t i = 0; i < gs.elements.size(); ++i)
      s.eigenvalues[i] = v.dot(gs.elements[i].matrix() * v);
  }
  return spaces;
}

std::vector<CommonEigenvector> common_eigenvectors(const GroupSample& gs, double cluster_tol) {
  std::vector<CommonEigenvector> out;
  for (const CommonEigenspace& s : common_eigenspaces(gs, cluster_tol)) {
    const auto es = restricted_form(s.basis);
    for (Eigen::Index i = 0; i < s.basis.cols(); ++i) {
      const double form = es.eigenvalues()[i];
      const CausalType type = std::abs(form) <= kFormTol ? CausalType::Null
                              : form < 0                 ? CausalType::Timelike
                                                         : CausalType::Spacelike;
      out.push_back({projective_normalize(s.basis * es.eigenvectors().col(i)), s.eigenvalues, type});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double certificate_residual(const OrbitCase& oc, const GroupSample& gs) {
  double worst = 0.0;
  for (const LorentzMatrix& t : gs.elements) {
    const MatrixXd& m = t.matrix();
    const double scale = std::max(1.0, max_abs(m));
    double defect = 0.0;
    switch (oc.tag) {
      case OrbitTag::FixedPoint: {
        const VectorXd q = oc.witness.col(0);
        defect = (m * q - q).cwiseAbs().maxCoeff() / q.cwiseAbs().maxCoeff();
        break;
      }
      case OrbitTag::Horosphere: {
        const VectorXd z = oc.witness.col(0).normalized();
        const VectorXd tz = m * z;
        const double mu = z.dot(tz);
        defect = mu > 0 ? (tz - mu * z).cwiseAbs().maxCoeff() : std::abs(mu) + 1.0;
        break;
      }
      case OrbitTag::TotallyGeodesic: {
        const MatrixXd& w = oc.witness;
        const MatrixXd tw = m * w;
        defect = (tw - w * (w.transpose() * tw)).cwiseAbs().maxCoeff();
        break;
      }
      case OrbitTag::Undetermined:
        return 0.0;
    }
    worst = std::max(worst, defect / scale);
  }
  return worst;
}

OrbitCase classify_orbit_case(const GroupSample& gs) {
  const int d = gs.dim_ambient;
  const std::vector<CommonEigenspace> spaces = common_eigenspaces(gs);

  auto finish = [&](OrbitCase oc) {
    oc.certificate_residual = certificate_residual(oc, gs);
    if (oc.certificate_residual > kCertificateTolerance) {
      oc.note = std::string(orbit_tag_name(oc.tag)) + " witness failed re-verification";
      oc.tag = OrbitTag::Undetermined;
    }
    return oc;
  };

  // (i) A timelike common eigenvector with eigenvalue 1 everywhere.
  for (const CommonEigenspace& s : spaces) {
    const bool unit = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                                  [](double l) { return std::abs(l - 1.0) <= 1e-8; });
    if (!unit) continue;
    const auto es = restricted_form(s.basis);
    if (es.eigenvalues()[0] >= -kFormTol) continue;
    VectorXd q = s.basis * es.eigenvectors().col(0);
    q /= std::sqrt(-lorentz_inner(q, q));
    if (q[0] < 0) q = -q;
    return finish({OrbitTag::FixedPoint, q, 0.0, "fixed point in hyperbolic space"});
  }

  // (ii) A proper nondegenerate invariant subspace meeting hyperbolic space,
  // from sums of common eigenspaces or the complement of a Euclidean sum.
  MatrixXd best;
  const std::size_t count = std::min<std::size_t>(spaces.size(), 10);
  for (std::size_t mask = 1; mask < (std::size_t{1} << count); ++mask) {
    MatrixXd sum(d, 0);
    for (std::size_t i = 0; i < count; ++i) {
      if (!(mask & (std::size_t{1} << i))) continue;
      const MatrixXd& b = spaces[i].basis;
      sum.conservativeResize(d, sum.cols() + b.cols());
      sum.rightCols(b.cols()) = b;
    }
    sum = orthonormal_span(sum);
    MatrixXd candidate;
    switch (signature(sum)) {
      case Signature::Lorentzian: candidate = sum; break;
      case Signature::Euclidean: candidate = orthonormal_span(lorentz_complement(sum)); break;
      case Signature::Degenerate: continue;
    }
    if (candidate.cols() < 2 || candidate.cols() >= d) continue;
    if (signature(candidate) != Signature::Lorentzian) continue;
    if (best.size() == 0 || candidate.cols() < best.cols()) best = candidate;
  }
  if (best.size() != 0) {
    // The invariant closure of one timelike vector may be smaller still.
    const MatrixXd closure = invariant_closure(gs, timelike_vector(best));
    if (closure.cols() >= 2 && closure.cols() < best.cols() &&
        signature(closure) == Signature::Lorentzian)
      best = closure;
    return finish({OrbitTag::TotallyGeodesic, best, 0.0,
                   "invariant Lorentzian subspace found; uniqueness of the totally geodesic "
                   "orbit is not certified from samples"});
  }

  // (iii) A null common eigenvector with positive eigenvalues.
  for (const CommonEigenspace& s : spaces) {
    const bool positive = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                                      [](double l) { return l > 0; });
    if (!positive) continue;
    const auto es = restricted_form(s.basis);
    for (Eigen::Index i = 0; i < s.basis.cols(); ++i) {
      if (std::abs(es.eigenvalues()[i]) > kFormTol) continue;
      const VectorXd z = projective_normalize(s.basis * es.eigenvectors().col(i));
      return finish({OrbitTag::Horosphere, z, 0.0,
                     "common null eigenvector; the horosphere foliation centered at z is "
                     "preserved"});
    }
  }

  return {OrbitTag::Undetermined, MatrixXd(d, 0), 0.0, "no certificate found"};
}

double horosphere_level(const Eigen::VectorXd& z, const HyperbolicPoint& y) {
  if (std::abs(lorentz_inner(z, z)) > kNullTolerance * z.squaredNorm())
    throw Error(ErrorCode::NotNull, "horosphere_level: z is not null");
  return lorentz_inner(y.coords(), z);
}

}  // namespace moebius_lab
