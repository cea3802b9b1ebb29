#include "diracsea/kernel3p1.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "diracsea/special.hpp"

namespace diracsea::kernel3p1 {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kChunk = 4096;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

cplx spatial_transform(const Pulse4& c, const Vec3& q) {
  const double sx = c.sigma_x;
  const double mag = std::pow(2.0 * kPi, 1.5) * sx * sx * sx * std::exp(-0.5 * dot3(q, q) * sx * sx);
  return mag * std::exp(-kI * dot3(q, c.x_center));
}

cplx temporal_transform_full(const Pulse4& c, double omega) {
  const double k = omega * c.sigma_t;
  return c.sigma_t * std::sqrt(2.0 * kPi) * std::exp(-0.5 * k * k) * std::exp(kI * omega * c.t_center);
}

// int_{-inf}^{t_s} exp(i w t) exp(-(t-tc)^2 / 2 st^2) dt
cplx temporal_transform_until(const Pulse4& c, double omega, double t_surface) {
  if (t_surface == std::numeric_limits<double>::infinity()) return temporal_transform_full(c, omega);
  const double k = omega * c.sigma_t;
  const double b = (t_surface - c.t_center) / c.sigma_t;
  const cplx z = cplx(-k, -b) / std::numbers::sqrt2;
  const cplx carrier = std::exp(kI * omega * c.t_center) * c.sigma_t * std::sqrt(kPi / 2.0);
  if (b <= 0.0) return carrier * std::exp(cplx(-0.5 * b * b, k * b)) * special::faddeeva(z);
  // Reflection w(z) = 2 exp(-z^2) - w(-z) with the exponents combined.
  if (b > 40.0) return temporal_transform_full(c, omega);
  return carrier * (2.0 * std::exp(-0.5 * k * k) -
                    std::exp(cplx(-0.5 * b * b, k * b)) * special::faddeeva(-z));
}

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  switch (k) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

Eigen::Matrix2cd sigma_dot(const Vec3& p) {
  return p[0] * pauli(0) + p[1] * pauli(1) + p[2] * pauli(2);
}

Eigen::Vector2cd helicity_spinor(const Vec3& p, Helicity s) {
  const double r = norm3(p);
  double theta = 0.0, phi = 0.0;
  if (r > 0.0) {
    theta = std::acos(std::clamp(p[2] / r, -1.0, 1.0));
    phi = std::atan2(p[1], p[0]);
  }
  Eigen::Vector2cd xi;
  if (s == Helicity::up)
    xi << std::cos(theta / 2), std::exp(kI * phi) * std::sin(theta / 2);
  else
    xi << -std::exp(-kI * phi) * std::sin(theta / 2), std::cos(theta / 2);
  return xi;
}

/// Gamma_mu u for Gamma_0 = 1, Gamma_k = -alpha^k.
Spinor4 apply_vertex(int mu, const Spinor4& u) {
  if (mu == 0) return u;
  const Eigen::Matrix2cd s = pauli(mu - 1);
  Spinor4 out;
  out.head<2>() = -(s * u.tail<2>());
  out.tail<2>() = -(s * u.head<2>());
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xoshiro256** seeded through splitmix64; fixed algorithm, so sample streams
/// do not depend on the standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) {
      s = splitmix64(s);
      w = s;
    }
  }
  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::array<double, 2> normal_pair() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

/// Per (p, p') kernel pieces shared by all helicity pairs.
struct KernelContext {
  std::array<Spinor4, 2> u_plus;
  std::array<std::array<Spinor4, 4>, 2> vertex_u_minus;  // [s'][mu]
};

KernelContext make_context(const Vec3& p, const Vec3& pp, double mass) {
  KernelContext ctx;
  for (int s = 0; s < 2; ++s) {
    ctx.u_plus[s] = positive_spinor(p, static_cast<Helicity>(s), mass);
    const Spinor4 um = negative_spinor(pp, static_cast<Helicity>(s), mass);
    for (int mu = 0; mu < 4; ++mu) ctx.vertex_u_minus[s][mu] = apply_vertex(mu, um);
  }
  return ctx;
}

std::array<cplx, 4> truncated_components(const Potential3p1& pot, double omega, const Vec3& q) {
  return fourier_potential_until(pot, omega, q, pot.surface_time);
}

/// Sum over helicities of |M_a - M_b|^2; b may be null.
double kernel_sum(const Potential3p1& a, const Potential3p1* b, const Vec3& p, const Vec3& pp) {
  const double mass = a.mass;
  const double e1 = std::sqrt(dot3(p, p) + mass * mass);
  const double e2 = std::sqrt(dot3(pp, pp) + mass * mass);
  const Vec3 q{p[0] - pp[0], p[1] - pp[1], p[2] - pp[2]};
  std::array<cplx, 4> t = truncated_components(a, e1 + e2, q);
  for (auto& v : t) v *= a.coupling;
  if (b) {
    const std::array<cplx, 4> tb = truncated_components(*b, e1 + e2, q);
    for (int mu = 0; mu < 4; ++mu) t[mu] -= b->coupling * tb[mu];
  }
  const KernelContext ctx = make_context(p, pp, mass);
  double total = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) {
      cplx m = 0.0;
      for (int mu = 0; mu < 4; ++mu)
        if (t[mu] != 0.0) m += t[mu] * ctx.u_plus[s].dot(ctx.vertex_u_minus[sp][mu]);
      total += std::norm(m);  // |-i m|^2
    }
  return total;
}

struct ChunkSum {
  double sum = 0.0;
  double sum_sq = 0.0;
};

double min_active_width(const Potential3p1& a, const Potential3p1* b) {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : a.components)
    if (c.amplitude != 0.0) w = std::min(w, c.sigma_x);
  if (b)
    for (const auto& c : b->components)
      if (c.amplitude != 0.0) w = std::min(w, c.sigma_x);
  return std::isfinite(w) ? w : 1.0;
}

HsEstimate estimate(const Potential3p1& a, const Potential3p1* b, double cutoff,
                    const SamplerSpec& spec) {
  a.validate();
  if (b) b->validate();
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw InvalidInput("cutoff", "must be positive");
  if (spec.samples < 2) throw InvalidInput("samples", "need at least two samples");

  // |T(q)|^2 ~ exp(-q^2 sx^2); sample q from a Gaussian 1.5 times wider.
  const double sq = 1.5 / (std::numbers::sqrt2 * min_active_width(a, b));
  const double norm6 = std::pow(2.0 * kPi, -6.0);
  const double gq_norm = 1.0 / (std::pow(2.0 * kPi, 1.5) * sq * sq * sq);

  const std::uint64_t chunks = (spec.samples + kChunk - 1) / kChunk;
  std::vector<ChunkSum> partial(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    Rng rng(splitmix64(spec.seed) ^ splitmix64(c + 0x51ed2701ULL));
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(spec.samples, begin + kChunk);
    ChunkSum acc;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double u = rng.uniform();
      const double cos_t = 2.0 * rng.uniform() - 1.0;
      const double phi = 2.0 * kPi * rng.uniform();
      const auto n01 = rng.normal_pair();
      const auto n23 = rng.normal_pair();
      const double r = cutoff * u;
      if (r <= 0.0) continue;
      const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
      const Vec3 p{r * sin_t * std::cos(phi), r * sin_t * std::sin(phi), r * cos_t};
      const Vec3 q{sq * n01[0], sq * n01[1], sq * n23[0]};
      const Vec3 pp{p[0] - q[0], p[1] - q[1], p[2] - q[2]};
      if (dot3(pp, pp) > cutoff * cutoff) continue;
      const double f_p = 1.0 / (4.0 * kPi * cutoff * r * r);
      const double g_q = gq_norm * std::exp(-0.5 * dot3(q, q) / (sq * sq));
      const double w = norm6 * kernel_sum(a, b, p, pp) / (f_p * g_q);
      acc.sum += w;
      acc.sum_sq += w * w;
    }
    partial[c] = acc;
  };

  const int threads = std::max(1, spec.threads);
  if (threads == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += threads) run_chunk(c);
      });
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& pc : partial) {
    sum += pc.sum;
    sum_sq += pc.sum_sq;
  }
  const double n = static_cast<double>(spec.samples);
  HsEstimate est;
  est.samples = spec.samples;
  est.value = sum / n;
  const double var = std::max(0.0, (sum_sq / n - est.value * est.value) * n / (n - 1.0));
  est.stderr = std::sqrt(var / n);
  est.over_budget = est.value > 0.0 ? est.stderr > spec.stderr_budget * est.value : est.stderr > 0.0;
  return est;
}

void validate_cutoffs(const std::vector<double>& cutoffs) {
  if (cutoffs.size() < 4) throw InvalidInput("cutoffs", "need at least four cutoffs");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0) || !std::isfinite(cutoffs[i]))
      throw InvalidInput("cutoffs", "cutoffs must be positive");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
      throw InvalidInput("cutoffs", "cutoffs must be strictly ascending");
  }
  if (cutoffs.back() < 8.0 * cutoffs.front())
    throw InvalidInput("cutoffs", "cutoffs must span at least a factor of 8");
}

}  // namespace

// ---------------------------------------------------------------------------

void Potential3p1::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidInput("kernel3p1.mass", "must be positive");
  if (!std::isfinite(coupling)) throw InvalidInput("kernel3p1.coupling", "must be finite");
  if (std::isnan(surface_time)) throw InvalidInput("kernel3p1.surface_time", "NaN");
  for (const auto& c : components) {
    if (!(c.sigma_t > 0.0) || !(c.sigma_x > 0.0) || !std::isfinite(c.sigma_t) ||
        !std::isfinite(c.sigma_x))
      throw InvalidInput("kernel3p1.components", "widths must be positive");
    if (!std::isfinite(c.amplitude) || !std::isfinite(c.t_center))
      throw InvalidInput("kernel3p1.components", "non-finite pulse parameter");
  }
}

bool Potential3p1::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const Pulse4& c) { return c.amplitude == 0.0; });
}

std::array<cplx, 4> fourier_potential(const Potential3p1& pot, double omega, const Vec3& q) {
  std::array<cplx, 4> out{};
  for (int mu = 0; mu < 4; ++mu) {
    const Pulse4& c = pot.components[mu];
    if (c.amplitude == 0.0) continue;
    out[mu] = c.amplitude * temporal_transform_full(c, omega) * spatial_transform(c, q);
  }
  return out;
}

std::array<cplx, 4> fourier_potential_until(const Potential3p1& pot, double omega, const Vec3& q,
                                            double t_surface) {
  std::array<cplx, 4> out{};
  for (int mu = 0; mu < 4; ++mu) {
    const Pulse4& c = pot.components[mu];
    if (c.amplitude == 0.0) continue;
    out[mu] = c.amplitude * temporal_transform_until(c, omega, t_surface) * spatial_transform(c, q);
  }
  return out;
}

Spinor4 positive_spinor(const Vec3& p, Helicity s, double mass) {
  const double e = std::sqrt(dot3(p, p) + mass * mass);
  const Eigen::Vector2cd xi = helicity_spinor(p, s);
  Spinor4 u;
  u.head<2>() = xi;
  u.tail<2>() = sigma_dot(p) * xi / (e + mass);
  return u * std::sqrt((e + mass) / (2.0 * e));
}

Spinor4 negative_spinor(const Vec3& p, Helicity s, double mass) {
  const double e = std::sqrt(dot3(p, p) + mass * mass);
  const Eigen::Vector2cd eta = helicity_spinor(p, s);
  Spinor4 v;
  v.head<2>() = -sigma_dot(p) * eta / (e + mass);
  v.tail<2>() = eta;
  return v * std::sqrt((e + mass) / (2.0 * e));
}

cplx pair_kernel_element(const Potential3p1& pot, const Vec3& p, Helicity s, const Vec3& p_prime,
                         Helicity s_prime) {
  const double e1 = std::sqrt(dot3(p, p) + pot.mass * pot.mass);
  const double e2 = std::sqrt(dot3(p_prime, p_prime) + pot.mass * pot.mass);
  const Vec3 q{p[0] - p_prime[0], p[1] - p_prime[1], p[2] - p_prime[2]};
  const std::array<cplx, 4> t = truncated_components(pot, e1 + e2, q);
  const Spinor4 up = positive_spinor(p, s, pot.mass);
  const Spinor4 um = negative_spinor(p_prime, s_prime, pot.mass);
  cplx m = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    if (t[mu] != 0.0) m += t[mu] * up.dot(apply_vertex(mu, um));
  return -kI * pot.coupling * m;
}

HsEstimate hs_norm_squared(const Potential3p1& pot, double cutoff, const SamplerSpec& spec) {
  return estimate(pot, nullptr, cutoff, spec);
}

HsEstimate hs_norm_squared_difference(const Potential3p1& a, const Potential3p1& b, double cutoff,
                                      const SamplerSpec& spec) {
  if (a.mass != b.mass || a.coupling != b.coupling)
    throw InvalidInput("kernel3p1.components_b", "potentials must share mass and coupling");
  return estimate(a, &b, cutoff, spec);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    default: return "inconclusive";
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("series", "need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CutoffProbeResult classify(std::vector<double> cutoffs, std::vector<double> hs2,
                           std::vector<double> stderr, bool any_over_budget,
                           const ProbeThresholds& thresholds) {
  CutoffProbeResult r;
  r.thresholds = thresholds;
  r.any_over_budget = any_over_budget;
  const std::size_t n = cutoffs.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double tol = 3.0 * std::hypot(stderr[i], stderr[i + 1]);
    if (hs2[i + 1] < hs2[i] - tol) r.monotone = false;
  }
  const bool all_zero = std::all_of(hs2.begin(), hs2.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    r.slope = 0.0;
    r.last_doubling_growth = 0.0;
    r.verdict = Verdict::convergent;
  } else {
    const std::size_t first = n / 2;
    std::vector<double> ux(cutoffs.begin() + first, cutoffs.end());
    std::vector<double> uy(hs2.begin() + first, hs2.end());
    const bool positive = std::all_of(uy.begin(), uy.end(), [](double v) { return v > 0.0; });
    r.slope = positive ? loglog_slope(ux, uy) : std::numeric_limits<double>::quiet_NaN();
    const double ratio = hs2[n - 1] / hs2[n - 2];
    const double doublings = std::log2(cutoffs[n - 1] / cutoffs[n - 2]);
    r.last_doubling_growth = std::pow(ratio, 1.0 / doublings) - 1.0;
    if (any_over_budget || std::isnan(r.slope))
      r.verdict = Verdict::inconclusive;
    else if (r.slope >= thresholds.divergent_slope)
      r.verdict = Verdict::divergent;
    else if (r.last_doubling_growth <= thresholds.convergent_growth)
      r.verdict = Verdict::convergent;
    else
      r.verdict = Verdict::inconclusive;
  }
  r.cutoffs = std::move(cutoffs);
  r.hs2 = std::move(hs2);
  r.stderr = std::move(stderr);
  return r;
}

namespace {

template <class Estimator>
CutoffProbeResult run_probe(const std::vector<double>& cutoffs, const ProbeThresholds& thresholds,
                            Estimator&& est) {
  validate_cutoffs(cutoffs);
  std::vector<double> hs2, se;
  bool over = false;
  for (double c : cutoffs) {
    const HsEstimate e = est(c);
    hs2.push_back(e.value);
    se.push_back(e.stderr);
    over = over || e.over_budget;
  }
  return classify(cutoffs, std::move(hs2), std::move(se), over, thresholds);
}

}  // namespace

CutoffProbeResult cutoff_probe(const Potential3p1& pot, const std::vector<double>& cutoffs,
                               const SamplerSpec& spec, const ProbeThresholds& thresholds) {
  return run_probe(cutoffs, thresholds,
                   [&](double c) { return hs_norm_squared(pot, c, spec); });
}

CutoffProbeResult tangential_probe(const Potential3p1& a, const Potential3p1& b,
                                   const std::vector<double>& cutoffs, const SamplerSpec& spec,
                                   const ProbeThresholds& thresholds) {
  if (a.mass != b.mass || a.coupling != b.coupling)
    throw InvalidInput("kernel3p1.components_b", "potentials must share mass and coupling");
  return run_probe(cutoffs, thresholds,
                   [&](double c) { return hs_norm_squared_difference(a, b, c, spec); });
}

}  // namespace diracsea::kernel3p1
