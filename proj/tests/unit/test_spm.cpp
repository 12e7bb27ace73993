#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaitxai/rng.hpp"
#include "gaitxai/spm1d.hpp"

using namespace gaitxai;

namespace {

CurveGroup random_group(const std::string& label, std::size_t n, std::size_t q,
                        Rng& rng, double mean = 0.0, double sd = 1.0) {
  CurveGroup g{label, {}};
  g.curves.assign(n, std::vector<double>(q));
  for (auto& c : g.curves)
    for (auto& v : c) v = rng.normal(mean, sd);
  return g;
}

// Gaussian-kernel smoothing used to manufacture fields of known smoothness.
std::vector<double> smooth(const std::vector<double>& x, double fwhm) {
  const double sigma = fwhm / std::sqrt(8.0 * std::numbers::ln2);
  const int half = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * half + 1);
  for (int j = -half; j <= half; ++j) {
    kernel[j + half] = std::exp(-0.5 * j * j / (sigma * sigma));
  }
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0, wsum = 0.0;
    for (int j = -half; j <= half; ++j) {
      const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i) + j;
      if (p >= 0 && p < static_cast<std::ptrdiff_t>(x.size())) {
        acc += kernel[j + half] * x[static_cast<std::size_t>(p)];
        wsum += kernel[j + half];
      }
    }
    out[i] = acc / wsum;
  }
  return out;
}

CurveGroup smooth_group(const std::string& label, std::size_t n, std::size_t q,
                        double fwhm, Rng& rng) {
  CurveGroup g{label, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> white(q);
    for (auto& v : white) v = rng.normal(0.0, 1.0);
    g.curves.push_back(smooth(white, fwhm));
  }
  return g;
}

}  // namespace

TEST_CASE("two_sample_t_curve identical groups give t = 0") {
  Rng rng(1);
  const CurveGroup a = random_group("a", 5, 20, rng);
  CurveGroup b = a;
  b.label = "b";
  const TCurve t = two_sample_t_curve(a, b);
  CHECK(t.nu == 8.0);
  for (double v : t.t) CHECK(v == 0.0);
}

TEST_CASE("two_sample_t_curve hand example") {
  const CurveGroup a{"a", {{1.0}, {2.0}}};
  const CurveGroup b{"b", {{2.0}, {3.0}}};
  const TCurve t = two_sample_t_curve(a, b);
  REQUIRE(t.t.size() == 1);
  CHECK(t.nu == 2.0);
  CHECK(t.t[0] == doctest::Approx(-std::numbers::sqrt2).epsilon(1e-12));
}

TEST_CASE("two_sample_t_curve matches an independent implementation") {
  Rng rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n_a = 2 + rng.index(6);
    const std::size_t n_b = 2 + rng.index(6);
    const std::size_t q_len = 1 + rng.index(30);
    const CurveGroup a = random_group("a", n_a, q_len, rng);
    const CurveGroup b = random_group("b", n_b, q_len, rng, 0.4);
    const TCurve t = two_sample_t_curve(a, b);
    const auto d = cohens_d_curve(a, b);
    for (std::size_t q = 0; q < q_len; ++q) {
      double ma = 0.0, mb = 0.0;
      for (const auto& c : a.curves) ma += c[q] / n_a;
      for (const auto& c : b.curves) mb += c[q] / n_b;
      double ss = 0.0;
      for (const auto& c : a.curves) ss += (c[q] - ma) * (c[q] - ma);
      for (const auto& c : b.curves) ss += (c[q] - mb) * (c[q] - mb);
      const double sp2 = ss / (n_a + n_b - 2.0);
      const double expected =
          (ma - mb) / std::sqrt(sp2 * (1.0 / n_a + 1.0 / n_b));
      CHECK(t.t[q] == doctest::Approx(expected).epsilon(1e-12));
      // t and Cohen's d are linked by the group sizes alone.
      CHECK(t.t[q] ==
            doctest::Approx(d[q] * std::sqrt(static_cast<double>(n_a) * n_b /
                                             (n_a + n_b)))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("t curve is antisymmetric and affine invariant") {
  Rng rng(3);
  const CurveGroup a = random_group("a", 4, 15, rng);
  const CurveGroup b = random_group("b", 6, 15, rng, 0.5);
  const TCurve ab = two_sample_t_curve(a, b);
  const TCurve ba = two_sample_t_curve(b, a);
  for (std::size_t q = 0; q < 15; ++q) {
    CHECK(ab.t[q] == doctest::Approx(-ba.t[q]).epsilon(1e-12));
  }

  auto transform = [](CurveGroup g) {
    for (auto& c : g.curves)
      for (auto& v : c) v = 2.5 * v - 7.0;
    return g;
  };
  const TCurve scaled = two_sample_t_curve(transform(a), transform(b));
  for (std::size_t q = 0; q < 15; ++q) {
    CHECK(scaled.t[q] == doctest::Approx(ab.t[q]).epsilon(1e-9));
  }
}

TEST_CASE("zero-variance nodes") {
  SUBCASE("equal constant means give t = 0") {
    const CurveGroup a{"a", {{1.0, 2.0}, {1.0, 2.0}}};
    const CurveGroup b{"b", {{1.0, 5.0}, {1.0, 5.0}}};
    const TCurve t = two_sample_t_curve(a, b);
    CHECK(t.t[0] == 0.0);
    CHECK_FALSE(t.degenerate[0]);
    CHECK(std::isinf(t.t[1]));
    CHECK(t.t[1] < 0.0);
    CHECK(t.degenerate[1]);
    // Cohen's d maps the degenerate node to 0.
    CHECK(cohens_d_curve(a, b) == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("group validation") {
    CHECK_THROWS_AS(two_sample_t_curve({"a", {{1.0}}}, {"b", {{1.0}, {2.0}}}),
                    GroupTooSmall);
    CHECK_THROWS_AS(two_sample_t_curve({"a", {{1.0}, {2.0}}},
                                       {"b", {{1.0, 2.0}, {2.0, 3.0}}}),
                    LengthMismatch);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(
        two_sample_t_curve({"a", {{nan}, {2.0}}}, {"b", {{1.0}, {2.0}}}),
        NonFiniteValue);
  }
}

TEST_CASE("estimate_fwhm on fields of known smoothness") {
  Rng rng(11);
  SUBCASE("white noise") {
    // For unit white noise the expected squared gradient is 2, so the
    // estimator converges to sqrt(4 ln 2 / 2).
    std::vector<std::vector<double>> res(200, std::vector<double>(101));
    for (auto& r : res)
      for (auto& v : r) v = rng.normal(0.0, 1.0);
    const double expected = std::sqrt(2.0 * std::numbers::ln2);
    CHECK(estimate_fwhm(res) == doctest::Approx(expected).epsilon(0.05));
  }
  SUBCASE("smoothed noise with FWHM 10") {
    std::vector<std::vector<double>> res;
    for (int i = 0; i < 200; ++i) {
      std::vector<double> white(101);
      for (auto& v : white) v = rng.normal(0.0, 1.0);
      res.push_back(smooth(white, 10.0));
    }
    const double est = estimate_fwhm(res);
    CHECK(est > 8.5);
    CHECK(est < 11.5);
  }
  SUBCASE("identical residuals are perfectly smooth") {
    // One shared shape has zero normalized gradient everywhere.
    std::vector<std::vector<double>> res(3, {1.0, 2.0, 4.0, 8.0});
    for (auto& r : res[1]) r = -r;
    res.pop_back();
    // res now holds {x, -x}: node-wise sd is |x|, normalized curves are
    // constant +1 / -1.
    CHECK(std::isinf(estimate_fwhm(res)));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(estimate_fwhm({}), DegenerateResiduals);
    CHECK_THROWS_AS(estimate_fwhm({{1.0}}), DegenerateResiduals);
    CHECK_THROWS_AS(estimate_fwhm({{0.0, 0.0, 0.0}}), DegenerateResiduals);
  }
}

TEST_CASE("rft_threshold") {
  SUBCASE("resels = 0 reduces to the pointwise t quantile") {
    for (double nu : {5.0, 10.0, 58.0}) {
      for (double alpha : {0.05, 0.025, 0.01}) {
        const boost::math::students_t dist(nu);
        const double expected =
            boost::math::quantile(boost::math::complement(dist, alpha));
        CHECK(rft_threshold(nu, 0.0, alpha) ==
              doctest::Approx(expected).epsilon(1e-8));
      }
    }
  }
  SUBCASE("threshold grows with resels and shrinks with alpha") {
    double prev = 0.0;
    for (double resels : {0.0, 1.0, 5.0, 20.0}) {
      const double t_star = rft_threshold(20.0, resels, 0.05);
      CHECK(t_star > prev);
      prev = t_star;
    }
    CHECK(rft_threshold(20.0, 5.0, 0.01) > rft_threshold(20.0, 5.0, 0.05));
    // More degrees of freedom make the field tamer.
    CHECK(rft_threshold(5.0, 5.0, 0.05) > rft_threshold(50.0, 5.0, 0.05));
  }
  SUBCASE("solution satisfies the defining equation") {
    const double nu = 30.0, resels = 8.0, alpha = 0.05;
    const double t_star = rft_threshold(nu, resels, alpha);
    const boost::math::students_t dist(nu);
    const double rho1 = std::sqrt(4.0 * std::numbers::ln2) /
                        (2.0 * std::numbers::pi) *
                        std::pow(1.0 + t_star * t_star / nu, -(nu - 1.0) / 2.0);
    const double attained =
        boost::math::cdf(boost::math::complement(dist, t_star)) + resels * rho1;
    CHECK(attained == doctest::Approx(alpha).epsilon(1e-9));
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(rft_threshold(0.0, 1.0, 0.05), NoSolution);
    CHECK_THROWS_AS(rft_threshold(10.0, -1.0, 0.05), NoSolution);
    CHECK_THROWS_AS(rft_threshold(10.0, 1.0, 0.0), NoSolution);
    CHECK_THROWS_AS(rft_threshold(10.0, 1.0, 1.0), NoSolution);
  }
}

TEST_CASE("permutation_threshold") {
  Rng rng(7);
  const CurveGroup a = random_group("a", 8, 25, rng);
  const CurveGroup b = random_group("b", 8, 25, rng);
  SUBCASE("deterministic per seed") {
    const double t1 = permutation_threshold(a, b, 0.05, 1000, 3);
    const double t2 = permutation_threshold(a, b, 0.05, 1000, 3);
    CHECK(t1 == t2);
    CHECK(t1 > 0.0);
  }
  SUBCASE("exceeds the pointwise quantile and shrinks with alpha") {
    const double strict = permutation_threshold(a, b, 0.01, 2000, 3);
    const double loose = permutation_threshold(a, b, 0.10, 2000, 3);
    CHECK(strict >= loose);
    const boost::math::students_t dist(14.0);
    // The max over 25 correlated-but-not-identical nodes dominates any
    // single node's two-sided quantile.
    CHECK(loose >
          boost::math::quantile(boost::math::complement(dist, 0.05)) * 0.9);
  }
  SUBCASE("too few permutations rejected") {
    CHECK_THROWS_AS(permutation_threshold(a, b, 0.05, 99, 0), GroupTooSmall);
  }
}

TEST_CASE("supra_clusters") {
  TCurve t;
  t.t = {0.5, 3.0, 4.0, -3.5, 0.2, -5.0, 0.1, 2.9};
  t.degenerate.assign(t.t.size(), false);
  SUBCASE("runs of |t| above threshold, inclusive bounds, signed peaks") {
    const auto clusters = supra_clusters(t, 2.95);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].start == 1);
    CHECK(clusters[0].end == 3);
    CHECK(clusters[0].peak_t == 4.0);
    CHECK(clusters[1].start == 5);
    CHECK(clusters[1].end == 5);
    CHECK(clusters[1].peak_t == -5.0);
  }
  SUBCASE("matches a brute-force node scan on random curves") {
    Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
      TCurve rt;
      rt.t.resize(50);
      for (auto& v : rt.t) v = rng.normal(0.0, 2.0);
      rt.degenerate.assign(50, false);
      const double star = 1.5;
      const auto clusters = supra_clusters(rt, star);
      std::vector<bool> covered(50, false);
      for (const auto& c : clusters) {
        REQUIRE(c.start <= c.end);
        for (std::size_t q = c.start; q <= c.end; ++q) covered[q] = true;
        double best = 0.0;
        for (std::size_t q = c.start; q <= c.end; ++q) {
          if (std::abs(rt.t[q]) > std::abs(best)) best = rt.t[q];
        }
        CHECK(c.peak_t == best);
      }
      for (std::size_t q = 0; q < 50; ++q) {
        CHECK(covered[q] == (std::abs(rt.t[q]) > star));
      }
    }
  }
  SUBCASE("infinite sentinel joins a cluster but never peaks") {
    TCurve it;
    it.t = {1.0, std::numeric_limits<double>::infinity(), 3.0, 1.0};
    it.degenerate = {false, true, false, false};
    const auto clusters = supra_clusters(it, 2.0);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].start == 1);
    CHECK(clusters[0].end == 2);
    CHECK(clusters[0].peak_t == 3.0);
  }
  SUBCASE("non-positive threshold rejected") {
    CHECK_THROWS_AS(supra_clusters(t, 0.0), NoSolution);
  }
}

TEST_CASE("spm_two_sample recovers a planted mean shift") {
  Rng rng(19);
  CurveGroup a = smooth_group("female", 15, 101, 8.0, rng);
  CurveGroup b = smooth_group("male", 15, 101, 8.0, rng);
  // Plant a strong shift on nodes [40, 60] of group b.
  for (auto& c : b.curves) {
    for (std::size_t q = 40; q <= 60; ++q) c[q] += 2.0;
  }
  const SpmResult res = spm_two_sample(a, b, {0.05, true});
  CHECK(res.t_curve.nu == 28.0);
  CHECK(res.fwhm > 4.0);
  CHECK(res.resels > 0.0);
  CHECK(res.t_star > 0.0);
  REQUIRE(!res.clusters.empty());
  // Some cluster must land inside the planted window, with a negative peak
  // (group a minus group b).
  bool found = false;
  for (const auto& c : res.clusters) {
    if (c.start <= 60 && c.end >= 40) {
      found = true;
      CHECK(c.peak_t < 0.0);
    }
  }
  CHECK(found);
  // The null region stays mostly clean.
  std::size_t null_nodes = 0;
  for (const auto& c : res.clusters) {
    for (std::size_t q = c.start; q <= c.end; ++q) {
      if (q < 35 || q > 65) ++null_nodes;
    }
  }
  CHECK(null_nodes < 10);
}
