#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitxai/errors.hpp"

namespace gaitxai {

struct CurveGroup {
  std::string label;
  std::vector<std::vector<double>> curves;  // n curves of common length Q

  std::size_t size() const { return curves.size(); }
  std::size_t length() const { return curves.empty() ? 0 : curves[0].size(); }
  void validate() const;
};

struct TCurve {
  std::vector<double> t;
  double nu = 0.0;                 // degrees of freedom n_A + n_B - 2
  std::vector<bool> degenerate;    // zero pooled variance with unequal means
};

struct Cluster {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // inclusive
  double peak_t = 0.0;    // signed value of largest |t| in the run
};

struct SpmResult {
  TCurve t_curve;
  double fwhm = 0.0;
  double resels = 0.0;
  double alpha = 0.05;
  double t_star = 0.0;
  std::vector<Cluster> clusters;
  std::vector<double> d_curve;
};

// Pointwise two-sample t statistic with pooled variance. Zero-variance nodes
// give t = 0 when means agree and an infinite sentinel (flagged) otherwise.
TCurve two_sample_t_curve(const CurveGroup& a, const CurveGroup& b);

std::vector<double> cohens_d_curve(const CurveGroup& a, const CurveGroup& b);

// Gradient-based smoothness (FWHM, in nodes) of node-wise normalized
// residual fields; returns +inf for perfectly smooth residuals.
double estimate_fwhm(const std::vector<std::vector<double>>& residuals);

// Pooled within-group residuals (curves minus their group mean).
std::vector<std::vector<double>> pooled_residuals(const CurveGroup& a,
                                                  const CurveGroup& b);

// Critical height solving alpha = P(T > t) + resels * rho1(t) by bisection.
// One-sided in its own terms; pass alpha/2 for two-sided |t| inference.
double rft_threshold(double nu, double resels, double alpha);

// (1 - alpha) quantile of the max_q |t(q)| permutation distribution.
double permutation_threshold(const CurveGroup& a, const CurveGroup& b,
                             double alpha, std::size_t n_perm,
                             std::uint64_t seed);

// Maximal runs with |t| > t_star; infinite sentinels are excluded from peaks
// but still count as supra-threshold nodes.
std::vector<Cluster> supra_clusters(const TCurve& t_curve, double t_star);

struct SpmOptions {
  double alpha = 0.05;
  bool two_sided = true;
};

SpmResult spm_two_sample(const CurveGroup& a, const CurveGroup& b,
                         const SpmOptions& options = {});

}  // namespace gaitxai
