#include <cmath>
#include <numbers>

#include "diracsea/kernel3p1.hpp"
#include "doctest.h"

using namespace diracsea;
using namespace diracsea::kernel3p1;

namespace {

Potential3p1 pulse(int mu, double amp = 1.0) {
  Potential3p1 p;
  p.components[mu] = {amp, 0.2, {0.1, -0.3, 0.2}, 0.9, 1.1};
  return p;
}

// Brute-force 4-D trapezoid of int dt d^3x exp(i w t - i q.x) A(t, x).
cplx quadrature_transform(const Pulse4& c, double w, const Vec3& q) {
  const int n = 48;
  const double span = 7.5;
  const double ht = 2 * span * c.sigma_t / n, hx = 2 * span * c.sigma_x / n;
  std::vector<cplx> et(n + 1), ex[3];
  std::vector<double> gt(n + 1), gx[3];
  for (int i = 0; i <= n; ++i) {
    const double t = c.t_center - span * c.sigma_t + i * ht;
    gt[i] = std::exp(-0.5 * std::pow((t - c.t_center) / c.sigma_t, 2));
    et[i] = std::exp(kI * w * t);
  }
  for (int d = 0; d < 3; ++d) {
    ex[d].resize(n + 1);
    gx[d].resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double x = c.x_center[d] - span * c.sigma_x + i * hx;
      gx[d][i] = std::exp(-0.5 * std::pow((x - c.x_center[d]) / c.sigma_x, 2));
      ex[d][i] = std::exp(-kI * q[d] * x);
    }
  }
  cplx sum = 0.0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int d = 0; d <= n; ++d) {
        const cplx outer = et[a] * gt[a] * ex[0][b] * gx[0][b] * ex[1][d] * gx[1][d];
        for (int f = 0; f <= n; ++f) sum += outer * ex[2][f] * gx[2][f];
      }
  return c.amplitude * sum * ht * hx * hx * hx;
}

// int_{-inf}^{ts} exp(i w t) exp(-(t-tc)^2/2 st^2) dt by midpoint rule.
cplx quadrature_time(const Pulse4& c, double w, double ts) {
  const double lo = c.t_center - 12.0 * c.sigma_t;
  const int n = 200000;
  const double h = (ts - lo) / n;
  cplx sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = lo + (i + 0.5) * h;
    sum += std::exp(kI * w * t) * std::exp(-0.5 * std::pow((t - c.t_center) / c.sigma_t, 2));
  }
  return sum * h;
}

}  // namespace

TEST_CASE("fourier transform: zero amplitude, zero frequency, quadrature oracle") {
  Potential3p1 zero;
  for (const cplx& v : fourier_potential(zero, 1.3, {0.2, 0.1, -0.4})) CHECK(v == 0.0);

  const Potential3p1 p = pulse(0, 2.0);
  const Pulse4& c = p.components[0];
  const double integral = 2.0 * c.sigma_t * std::sqrt(2 * std::numbers::pi) *
                          std::pow(2 * std::numbers::pi, 1.5) * std::pow(c.sigma_x, 3);
  CHECK(std::abs(fourier_potential(p, 0.0, {0, 0, 0})[0] - integral) < 1e-12 * integral);

  const double w = 1.7;
  const Vec3 q{0.4, -0.9, 0.3};
  const cplx closed = fourier_potential(p, w, q)[0];
  const cplx quad = quadrature_transform(c, w, q);
  CHECK(std::abs(closed - quad) < 1e-6 * std::abs(quad));
  // hermiticity for real potentials
  const cplx neg = fourier_potential(p, -w, {-q[0], -q[1], -q[2]})[0];
  CHECK(std::abs(neg - std::conj(closed)) < 1e-12 * std::abs(closed));
}

TEST_CASE("truncated transform matches time quadrature and tends to the full one") {
  Potential3p1 p = pulse(2, 1.0);
  const Pulse4& c = p.components[2];
  const Vec3 q{0.3, 0.2, -0.1};
  for (double w : {0.0, 2.5, 9.0})
    for (double ts : {-1.0, 0.2, 1.5}) {
      const cplx closed = fourier_potential_until(p, w, q, ts)[2];
      const cplx spatial = fourier_potential(p, 0.0, q)[2] / fourier_potential(p, 0.0, {0, 0, 0})[2];
      const double full_t = c.sigma_t * std::sqrt(2 * std::numbers::pi);
      const double spatial0 = std::abs(fourier_potential(p, 0.0, {0, 0, 0})[2]) / full_t;
      const cplx oracle = quadrature_time(c, w, ts) * spatial * spatial0;
      CHECK(std::abs(closed - oracle) < 1e-6 * std::max(std::abs(oracle), 1e-3 * spatial0));
    }
  const cplx full = fourier_potential(p, 2.5, q)[2];
  const cplx late = fourier_potential_until(p, 2.5, q, 30.0)[2];
  CHECK(std::abs(full - late) < 1e-12 * std::abs(full));
  const cplx inf = fourier_potential_until(p, 2.5, q, std::numeric_limits<double>::infinity())[2];
  CHECK(std::abs(full - inf) == 0.0);
}

TEST_CASE("free spinors are normalized, orthogonal at equal momentum, energy eigenvectors") {
  const Vec3 p{0.3, -1.2, 0.7};
  for (Helicity s : {Helicity::up, Helicity::down}) {
    CHECK(positive_spinor(p, s, 1.0).norm() == doctest::Approx(1.0));
    CHECK(negative_spinor(p, s, 1.0).norm() == doctest::Approx(1.0));
    for (Helicity t : {Helicity::up, Helicity::down})
      CHECK(std::abs(positive_spinor(p, s, 1.0).dot(negative_spinor(p, t, 1.0))) < 1e-14);
  }
  // H = alpha.p + beta m in the Dirac representation
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  const double e = std::sqrt(0.09 + 1.44 + 0.49 + 1.0);
  Eigen::Matrix2cd sp;
  sp << p[2], cplx(p[0], -p[1]), cplx(p[0], p[1]), -p[2];
  h.topLeftCorner<2, 2>() = Eigen::Matrix2cd::Identity();
  h.bottomRightCorner<2, 2>() = -Eigen::Matrix2cd::Identity();
  h.topRightCorner<2, 2>() = sp;
  h.bottomLeftCorner<2, 2>() = sp;
  for (Helicity s : {Helicity::up, Helicity::down}) {
    const Spinor4 u = positive_spinor(p, s, 1.0), v = negative_spinor(p, s, 1.0);
    CHECK((h * u - e * u).norm() < 1e-13);
    CHECK((h * v + e * v).norm() < 1e-13);
  }
}

TEST_CASE("kernel element: zero potential, equal-momentum A0 zero, time-integration oracle") {
  const Vec3 p{0.4, 0.1, -0.5}, pp{-0.2, 0.6, 0.3};
  Potential3p1 zero;
  CHECK(pair_kernel_element(zero, p, Helicity::up, pp, Helicity::down) == 0.0);

  const Potential3p1 a0 = pulse(0);
  for (Helicity s : {Helicity::up, Helicity::down})
    CHECK(std::abs(pair_kernel_element(a0, p, s, p, s)) < 1e-14);

  // M = -i e int^{ts} dt exp(i(E+E')t) sum_mu A_mu(t, q) <u+, Gamma_mu u->
  Potential3p1 mixed;
  mixed.components[0] = {0.6, 0.1, {0.0, 0.2, 0.0}, 0.8, 1.0};
  mixed.components[1] = {1.0, -0.2, {0.1, 0.0, 0.0}, 1.0, 1.2};
  mixed.components[3] = {0.4, 0.3, {0.0, 0.0, -0.2}, 0.7, 0.9};
  mixed.coupling = 0.3;
  mixed.surface_time = 0.4;
  const double e1 = std::sqrt(0.16 + 0.01 + 0.25 + 1.0), e2 = std::sqrt(0.04 + 0.36 + 0.09 + 1.0);
  const Vec3 q{p[0] - pp[0], p[1] - pp[1], p[2] - pp[2]};
  const Spinor4 u = positive_spinor(p, Helicity::up, 1.0);
  const Spinor4 v = negative_spinor(pp, Helicity::down, 1.0);
  Eigen::Matrix4cd alpha[3];
  const Eigen::Matrix2cd s1 = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  const Eigen::Matrix2cd s2 = (Eigen::Matrix2cd() << 0, -kI, kI, 0).finished();
  const Eigen::Matrix2cd s3 = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  const Eigen::Matrix2cd sig[3] = {s1, s2, s3};
  for (int k = 0; k < 3; ++k) {
    alpha[k].setZero();
    alpha[k].topRightCorner<2, 2>() = sig[k];
    alpha[k].bottomLeftCorner<2, 2>() = sig[k];
  }
  cplx oracle = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const Pulse4& c = mixed.components[mu];
    if (c.amplitude == 0.0) continue;
    Potential3p1 only;
    only.components[mu] = c;
    const cplx spatial = fourier_potential(only, 0.0, q)[mu] /
                         (c.sigma_t * std::sqrt(2 * std::numbers::pi));
    const cplx vertex = mu == 0 ? u.dot(v) : cplx(-u.dot(alpha[mu - 1] * v));
    oracle += quadrature_time(c, e1 + e2, mixed.surface_time) * spatial * vertex;
  }
  oracle *= -kI * mixed.coupling;
  const cplx m = pair_kernel_element(mixed, p, Helicity::up, pp, Helicity::down);
  CHECK(std::abs(m - oracle) < 1e-6 * std::abs(oracle));
}

TEST_CASE("kernel element: rotation invariance and parity") {
  Potential3p1 iso;
  iso.components[0] = {1.0, 0.0, {0, 0, 0}, 1.0, 1.0};
  const Vec3 p{0.5, -0.3, 0.8}, pp{-0.4, 0.2, 0.1};
  // rotation by 90 degrees about z
  const Vec3 rp{-p[1], p[0], p[2]}, rpp{-pp[1], pp[0], pp[2]};
  double sum = 0.0, rsum = 0.0;
  for (Helicity s : {Helicity::up, Helicity::down})
    for (Helicity t : {Helicity::up, Helicity::down}) {
      sum += std::norm(pair_kernel_element(iso, p, s, pp, t));
      rsum += std::norm(pair_kernel_element(iso, rp, s, rpp, t));
    }
  CHECK(rsum == doctest::Approx(sum).epsilon(1e-12));

  Potential3p1 even;
  even.components[1] = {1.0, 0.0, {0, 0, 0}, 1.0, 1.0};
  double fwd = 0.0, par = 0.0;
  for (Helicity s : {Helicity::up, Helicity::down})
    for (Helicity t : {Helicity::up, Helicity::down}) {
      fwd += std::norm(pair_kernel_element(even, p, s, pp, t));
      par += std::norm(pair_kernel_element(even, {-p[0], -p[1], -p[2]}, s, {-pp[0], -pp[1], -pp[2]}, t));
    }
  CHECK(par == doctest::Approx(fwd).epsilon(1e-12));
}

TEST_CASE("hs estimate: zero, determinism across threads, e^2 homogeneity, stderr scaling") {
  SamplerSpec spec;
  spec.samples = 20000;
  Potential3p1 zero;
  const HsEstimate z = hs_norm_squared(zero, 10.0, spec);
  CHECK(z.value == 0.0);
  CHECK(z.stderr == 0.0);

  const Potential3p1 p = pulse(1);
  const HsEstimate a = hs_norm_squared(p, 10.0, spec);
  spec.threads = 3;
  const HsEstimate b = hs_norm_squared(p, 10.0, spec);
  CHECK(a.value == b.value);
  CHECK(a.stderr == b.stderr);

  Potential3p1 p2 = p;
  p2.coupling = 2.0;
  const HsEstimate c = hs_norm_squared(p2, 10.0, spec);
  CHECK(c.value == doctest::Approx(4.0 * a.value).epsilon(1e-12));

  spec.samples = 40000;
  const HsEstimate d = hs_norm_squared(p, 10.0, spec);
  CHECK(d.stderr / a.stderr == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("difference kernel of identical potentials vanishes") {
  SamplerSpec spec;
  spec.samples = 5000;
  const Potential3p1 p = pulse(2);
  CHECK(hs_norm_squared_difference(p, p, 10.0, spec).value == 0.0);
  Potential3p1 q = p;
  q.mass = 2.0;
  CHECK_THROWS_AS(hs_norm_squared_difference(p, q, 10.0, spec), InvalidInput);
}

TEST_CASE("classification rules") {
  const std::vector<double> cut{5, 10, 20, 40};
  const ProbeThresholds th;
  CHECK(classify(cut, {1, 2, 4, 8}, {0, 0, 0, 0}, false, th).verdict == Verdict::divergent);
  CHECK(classify(cut, {1, 1.1, 1.12, 1.13}, {0, 0, 0, 0}, false, th).verdict == Verdict::convergent);
  // slow but persistent growth is neither
  CHECK(classify(cut, {1, 1.2, 1.44, 1.73}, {0, 0, 0, 0}, false, th).verdict == Verdict::inconclusive);
  CHECK(classify(cut, {1, 2, 4, 8}, {0, 0, 0, 0}, true, th).verdict == Verdict::inconclusive);
  CHECK(classify(cut, {0, 0, 0, 0}, {0, 0, 0, 0}, false, th).verdict == Verdict::convergent);
  CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK_FALSE(classify(cut, {1, 0.5, 1, 1}, {0.01, 0.01, 0.01, 0.01}, false, th).monotone);
}

TEST_CASE("probe input validation") {
  SamplerSpec spec;
  spec.samples = 100;
  const Potential3p1 p = pulse(0);
  CHECK_THROWS_AS(cutoff_probe(p, {5, 10, 20}, spec), InvalidInput);
  CHECK_THROWS_AS(cutoff_probe(p, {5, 10, 8, 40}, spec), InvalidInput);
  CHECK_THROWS_AS(cutoff_probe(p, {5, 6, 7, 8}, spec), InvalidInput);
  Potential3p1 bad = p;
  bad.components[0].sigma_x = 0.0;
  CHECK_THROWS_AS(hs_norm_squared(bad, 5, spec), InvalidInput);
}

TEST_CASE("cutoff probe on zero potential") {
  SamplerSpec spec;
  spec.samples = 1000;
  const CutoffProbeResult r = cutoff_probe(Potential3p1{}, {5, 10, 20, 40}, spec);
  CHECK(r.verdict == Verdict::convergent);
  for (double v : r.hs2) CHECK(v == 0.0);
}
