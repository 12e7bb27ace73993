#include "gaitxai/spm1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "gaitxai/rng.hpp"

namespace gaitxai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const CurveGroup& a, const CurveGroup& b) {
  a.validate();
  b.validate();
  if (a.length() != b.length()) {
    throw LengthMismatch("curve groups have different lengths");
  }
}

struct NodeStats {
  double mean_diff;
  double pooled_var;  // unbiased pooled variance
};

NodeStats node_stats(const CurveGroup& a, const CurveGroup& b, std::size_t q) {
  double ma = 0.0, mb = 0.0;
  for (const auto& c : a.curves) ma += c[q];
  for (const auto& c : b.curves) mb += c[q];
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double ss = 0.0;
  for (const auto& c : a.curves) ss += (c[q] - ma) * (c[q] - ma);
  for (const auto& c : b.curves) ss += (c[q] - mb) * (c[q] - mb);
  const double nu = static_cast<double>(a.size() + b.size() - 2);
  return {ma - mb, ss / nu};
}

}  // namespace

void CurveGroup::validate() const {
  if (curves.size() < 2) {
    throw GroupTooSmall("curve group needs at least 2 curves");
  }
  const std::size_t q = curves[0].size();
  for (const auto& c : curves) {
    if (c.size() != q) throw LengthMismatch("curves in group have unequal lengths");
    for (double v : c) {
      if (!std::isfinite(v)) throw NonFiniteValue("non-finite curve value");
    }
  }
}

TCurve two_sample_t_curve(const CurveGroup& a, const CurveGroup& b) {
  check_pair(a, b);
  const std::size_t q_len = a.length();
  const double inv_n = 1.0 / static_cast<double>(a.size()) +
                       1.0 / static_cast<double>(b.size());
  TCurve out;
  out.nu = static_cast<double>(a.size() + b.size() - 2);
  out.t.resize(q_len);
  out.degenerate.assign(q_len, false);
  for (std::size_t q = 0; q < q_len; ++q) {
    const NodeStats s = node_stats(a, b, q);
    if (s.pooled_var == 0.0) {
      if (s.mean_diff == 0.0) {
        out.t[q] = 0.0;
      } else {
        out.t[q] = s.mean_diff > 0.0 ? kInf : -kInf;
        out.degenerate[q] = true;
      }
    } else {
      out.t[q] = s.mean_diff / std::sqrt(s.pooled_var * inv_n);
    }
  }
  return out;
}

std::vector<double> cohens_d_curve(const CurveGroup& a, const CurveGroup& b) {
  check_pair(a, b);
  std::vector<double> d(a.length());
  for (std::size_t q = 0; q < d.size(); ++q) {
    const NodeStats s = node_stats(a, b, q);
    d[q] = s.pooled_var == 0.0 ? 0.0 : s.mean_diff / std::sqrt(s.pooled_var);
  }
  return d;
}

std::vector<std::vector<double>> pooled_residuals(const CurveGroup& a,
                                                  const CurveGroup& b) {
  check_pair(a, b);
  std::vector<std::vector<double>> residuals;
  residuals.reserve(a.size() + b.size());
  for (const CurveGroup* g : {&a, &b}) {
    const std::size_t q_len = g->length();
    std::vector<double> mean(q_len, 0.0);
    for (const auto& c : g->curves) {
      for (std::size_t q = 0; q < q_len; ++q) mean[q] += c[q];
    }
    for (auto& m : mean) m /= static_cast<double>(g->size());
    for (const auto& c : g->curves) {
      std::vector<double> r(q_len);
      for (std::size_t q = 0; q < q_len; ++q) r[q] = c[q] - mean[q];
      residuals.push_back(std::move(r));
    }
  }
  return residuals;
}

double estimate_fwhm(const std::vector<std::vector<double>>& residuals) {
  if (residuals.empty() || residuals[0].size() < 2) {
    throw DegenerateResiduals("need at least one residual curve of length >= 2");
  }
  const std::size_t n = residuals.size();
  const std::size_t q_len = residuals[0].size();

  // Node-wise normalization to unit variance across curves.
  std::vector<double> sd(q_len, 0.0);
  for (const auto& r : residuals) {
    if (r.size() != q_len) throw LengthMismatch("residual lengths differ");
    for (std::size_t q = 0; q < q_len; ++q) sd[q] += r[q] * r[q];
  }
  bool any_nonzero = false;
  for (auto& s : sd) {
    s = std::sqrt(s / static_cast<double>(n));
    any_nonzero = any_nonzero || s > 0.0;
  }
  if (!any_nonzero) throw DegenerateResiduals("all residuals are zero");

  double v = 0.0;
  std::size_t count = 0;
  for (const auto& r : residuals) {
    for (std::size_t q = 0; q + 1 < q_len; ++q) {
      if (sd[q] == 0.0 || sd[q + 1] == 0.0) continue;
      const double g = r[q + 1] / sd[q + 1] - r[q] / sd[q];
      v += g * g;
      ++count;
    }
  }
  if (count == 0) throw DegenerateResiduals("no usable gradient nodes");
  v /= static_cast<double>(count);
  if (v == 0.0) return kInf;
  return std::sqrt(4.0 * std::numbers::ln2 / v);
}

double rft_threshold(double nu, double resels, double alpha) {
  if (!(nu > 0.0) || resels < 0.0 || !(alpha > 0.0) || !(alpha < 1.0)) {
    throw NoSolution("invalid rft_threshold arguments");
  }
  const boost::math::students_t dist(nu);
  // 1D Euler characteristic density of a t-field.
  auto rho1 = [&](double t) {
    return std::sqrt(4.0 * std::numbers::ln2) / (2.0 * std::numbers::pi) *
           std::pow(1.0 + t * t / nu, -(nu - 1.0) / 2.0);
  };
  auto f = [&](double t) {
    return boost::math::cdf(boost::math::complement(dist, t)) +
           resels * rho1(t) - alpha;
  };
  double lo = 0.0, hi = 100.0;
  if (f(lo) < 0.0 || f(hi) > 0.0) {
    throw NoSolution("alpha level unreachable on t in [0, 100]");
  }
  // f is strictly decreasing on [0, 100] for the alphas of interest.
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid; else hi = mid;
  }
  double t_star = 0.5 * (lo + hi);
  if (std::abs(f(t_star)) > 1e-10) {
    throw NoSolution("bisection did not converge");
  }
  return t_star;
}

double permutation_threshold(const CurveGroup& a, const CurveGroup& b,
                             double alpha, std::size_t n_perm,
                             std::uint64_t seed) {
  check_pair(a, b);
  if (n_perm < 1000) throw GroupTooSmall("need at least 1000 permutations");

  std::vector<const std::vector<double>*> pool;
  for (const auto& c : a.curves) pool.push_back(&c);
  for (const auto& c : b.curves) pool.push_back(&c);
  const std::size_t n_a = a.size();

  Rng rng(seed);
  std::vector<std::size_t> idx(pool.size());
  std::vector<double> max_stats;
  max_stats.reserve(n_perm);
  for (std::size_t p = 0; p < n_perm; ++p) {
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    CurveGroup pa{"perm_a", {}}, pb{"perm_b", {}};
    pa.curves.reserve(n_a);
    pb.curves.reserve(pool.size() - n_a);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < n_a ? pa : pb).curves.push_back(*pool[idx[i]]);
    }
    const TCurve t = two_sample_t_curve(pa, pb);
    double max_abs = 0.0;
    for (std::size_t q = 0; q < t.t.size(); ++q) {
      if (!t.degenerate[q]) max_abs = std::max(max_abs, std::abs(t.t[q]));
    }
    max_stats.push_back(max_abs);
  }
  std::sort(max_stats.begin(), max_stats.end());
  // Empirical (1 - alpha) quantile: k-th order statistic, k = ceil((1-a)*n).
  std::size_t rank = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n_perm)));
  rank = std::clamp<std::size_t>(rank, 1, max_stats.size());
  return max_stats[rank - 1];
}

std::vector<Cluster> supra_clusters(const TCurve& t_curve, double t_star) {
  if (!(t_star > 0.0)) throw NoSolution("t_star must be positive");
  std::vector<Cluster> clusters;
  const std::size_t q_len = t_curve.t.size();
  std::size_t q = 0;
  while (q < q_len) {
    if (std::abs(t_curve.t[q]) > t_star) {
      Cluster c{q, q, 0.0};
      double best_abs = -1.0;
      while (q < q_len && std::abs(t_curve.t[q]) > t_star) {
        if (!t_curve.degenerate[q] && std::abs(t_curve.t[q]) > best_abs) {
          best_abs = std::abs(t_curve.t[q]);
          c.peak_t = t_curve.t[q];
        }
        c.end = q;
        ++q;
      }
      clusters.push_back(c);
    } else {
      ++q;
    }
  }
  return clusters;
}

SpmResult spm_two_sample(const CurveGroup& a, const CurveGroup& b,
                         const SpmOptions& options) {
  SpmResult res;
  res.alpha = options.alpha;
  res.t_curve = two_sample_t_curve(a, b);
  res.d_curve = cohens_d_curve(a, b);
  res.fwhm = estimate_fwhm(pooled_residuals(a, b));
  res.resels = std::isinf(res.fwhm)
                   ? 0.0
                   : static_cast<double>(a.length() - 1) / res.fwhm;
  const double tail_alpha = options.two_sided ? options.alpha / 2.0 : options.alpha;
  res.t_star = rft_threshold(res.t_curve.nu, res.resels, tail_alpha);
  res.clusters = supra_clusters(res.t_curve, res.t_star);
  return res;
}

}  // namespace gaitxai
