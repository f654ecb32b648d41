#include "higgs/vortex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace higgs::vortex {

using lattice::cplx;
using lattice::Field;
using lattice::Mat;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

int idx(Block b) { return static_cast<int>(b); }

}  // namespace

double VortexParams::tau_prime() const {
  return ((4.0 * kPi / vol) * (d1 + d2) - tau * r1) / r2;
}

double VortexParams::side() const { return std::sqrt(vol); }

void validate(const VortexParams& p) {
  if (!(p.vol > 0) || !std::isfinite(p.vol)) throw ParameterError("vol must be positive");
  if (p.r1 < 1 || p.r2 < 1 || p.r1 > lattice::kMaxRank || p.r2 > lattice::kMaxRank) {
    throw ParameterError("ranks must lie in [1, " + std::to_string(lattice::kMaxRank) + "]");
  }
  if (p.d1 != 0 || p.d2 != 0) {
    throw ParameterError("only degree-0 trivial bundles are supported on the lattice");
  }
  if (!std::isfinite(p.tau)) throw ParameterError("tau must be finite");
}

double sigma_of(const VortexParams& p) {
  const double denom = (p.r1 + p.r2) * p.tau / (4.0 * kPi) - (p.d1 + p.d2) / p.vol;
  if (!(denom > 0)) {
    const double tau_min = 4.0 * kPi * (p.d1 + p.d2) / (p.vol * (p.r1 + p.r2));
    throw ParameterError("sigma undefined: need tau > " + std::to_string(tau_min) +
                         " (4 pi (d1+d2) / (vol (r1+r2)))");
  }
  return 2.0 * p.r2 / denom;
}

DerivedConstants derived_constants(const VortexParams& p) {
  DerivedConstants c;
  c.sigma = sigma_of(p);
  const double deg_f = c.sigma * (p.d1 + p.d2) + 2.0 * p.r2 * p.vol;
  c.c = (2.0 * kPi / (p.vol * c.sigma)) * deg_f / (p.r1 + p.r2);
  c.c_shifted = c.c - 4.0 * kPi / c.sigma;
  return c;
}

namespace {

// Structure-of-arrays samples at the evaluation points: for every block and
// matrix entry e, channel[e * Q + p]. Connection x-components carry d2 only,
// y-components d1 only; Higgs fields and morphisms carry both.
struct Channels {
  std::vector<cplx> v, d1, d2;
};

bool needs_d1(Block b) { return b != Block::A1x && b != Block::A2x; }
bool needs_d2(Block b) { return b != Block::A1y && b != Block::A2y; }

struct Expanded {
  std::size_t q = 0;
  std::array<Channels, lattice::kBlockCount> c;
};

Expanded expand(spectral::GridOperator& ops, const LatticeState& s) {
  Expanded x;
  x.q = ops.points();
  const std::size_t n = s.sites();
  std::vector<cplx> coarse(n);
  for (Block b : lattice::kAllBlocks) {
    auto [rows, cols] = s.shape(b);
    Channels& ch = x.c[idx(b)];
    const std::size_t size = static_cast<std::size_t>(rows * cols) * x.q;
    ch.v.resize(size);
    ch.d1.resize(needs_d1(b) ? size : 0);
    ch.d2.resize(needs_d2(b) ? size : 0);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const std::size_t off = static_cast<std::size_t>(i * cols + j) * x.q;
        for (std::size_t site = 0; site < n; ++site) coarse[site] = s[b][site](i, j);
        ops.forward(coarse.data(), ch.v.data() + off, needs_d1(b) ? ch.d1.data() + off : nullptr,
                    needs_d2(b) ? ch.d2.data() + off : nullptr);
      }
    }
  }
  return x;
}

Expanded zero_like(const Expanded& x) {
  Expanded g;
  g.q = x.q;
  for (int k = 0; k < lattice::kBlockCount; ++k) {
    g.c[k].v.assign(x.c[k].v.size(), cplx(0.0));
    g.c[k].d1.assign(x.c[k].d1.size(), cplx(0.0));
    g.c[k].d2.assign(x.c[k].d2.size(), cplx(0.0));
  }
  return g;
}

void contract(spectral::GridOperator& ops, const Expanded& g, LatticeState& out) {
  const std::size_t n = out.sites();
  std::vector<cplx> coarse(n);
  for (Block b : lattice::kAllBlocks) {
    auto [rows, cols] = out.shape(b);
    const Channels& ch = g.c[idx(b)];
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const std::size_t off = static_cast<std::size_t>(i * cols + j) * g.q;
        ops.adjoint(ch.v.data() + off, ch.d1.empty() ? nullptr : ch.d1.data() + off,
                    ch.d2.empty() ? nullptr : ch.d2.data() + off, coarse.data());
        for (std::size_t site = 0; site < n; ++site) out[b][site](i, j) = coarse[site];
      }
    }
    if (lattice::is_connection(b)) {
      for (Mat& m : out[b]) m = lattice::anti_hermitian_part(m);
    }
  }
}

template <class M>
void load(const std::vector<cplx>& ch, std::size_t q, std::size_t p, M& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) m(i, j) = ch[static_cast<std::size_t>(i * m.cols() + j) * q + p];
  }
}

template <class M>
void store_add(std::vector<cplx>& ch, std::size_t q, std::size_t p, const M& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) ch[static_cast<std::size_t>(i * m.cols() + j) * q + p] += m(i, j);
  }
}

// One bundle at one evaluation point: unitary potentials, Higgs field, and the
// derivatives entering the curvature and the integrability term.
template <class MA>
struct BundlePt {
  MA ax, ay, th, d1ay, d2ax, d1th, d2th;
  void zero() {
    for (MA* m : {&ax, &ay, &th, &d1ay, &d2ax, &d1th, &d2th}) m->setZero();
  }
};

template <class MM>
struct MorphPt {
  MM m, d1, d2;
  void zero() {
    for (MM* x : {&m, &d1, &d2}) x->setZero();
  }
};

template <int R1, int R2>
struct Pt {
  using M11 = Eigen::Matrix<cplx, R1, R1>;
  using M22 = Eigen::Matrix<cplx, R2, R2>;
  using M12 = Eigen::Matrix<cplx, R1, R2>;
  using M21 = Eigen::Matrix<cplx, R2, R1>;
  BundlePt<M11> e1;
  BundlePt<M22> e2;
  MorphPt<M12> phi;
  MorphPt<M21> psi;
  void zero() {
    e1.zero();
    e2.zero();
    phi.zero();
    psi.zero();
  }
};

struct BlockIds {
  Block ax, ay, th;
};
constexpr BlockIds kE1{Block::A1x, Block::A1y, Block::theta1};
constexpr BlockIds kE2{Block::A2x, Block::A2y, Block::theta2};

template <class MA>
void load_bundle(const Expanded& x, std::size_t p, BlockIds ids, BundlePt<MA>& b) {
  load(x.c[idx(ids.ax)].v, x.q, p, b.ax);
  load(x.c[idx(ids.ay)].v, x.q, p, b.ay);
  load(x.c[idx(ids.th)].v, x.q, p, b.th);
  load(x.c[idx(ids.ay)].d1, x.q, p, b.d1ay);
  load(x.c[idx(ids.ax)].d2, x.q, p, b.d2ax);
  load(x.c[idx(ids.th)].d1, x.q, p, b.d1th);
  load(x.c[idx(ids.th)].d2, x.q, p, b.d2th);
}

template <class MA>
void store_bundle(Expanded& g, std::size_t p, BlockIds ids, const BundlePt<MA>& b) {
  store_add(g.c[idx(ids.ax)].v, g.q, p, b.ax);
  store_add(g.c[idx(ids.ay)].v, g.q, p, b.ay);
  store_add(g.c[idx(ids.th)].v, g.q, p, b.th);
  store_add(g.c[idx(ids.ay)].d1, g.q, p, b.d1ay);
  store_add(g.c[idx(ids.ax)].d2, g.q, p, b.d2ax);
  store_add(g.c[idx(ids.th)].d1, g.q, p, b.d1th);
  store_add(g.c[idx(ids.th)].d2, g.q, p, b.d2th);
}

template <class MM>
void load_morph(const Expanded& x, std::size_t p, Block blk, MorphPt<MM>& m) {
  load(x.c[idx(blk)].v, x.q, p, m.m);
  load(x.c[idx(blk)].d1, x.q, p, m.d1);
  load(x.c[idx(blk)].d2, x.q, p, m.d2);
}

template <class MM>
void store_morph(Expanded& g, std::size_t p, Block blk, const MorphPt<MM>& m) {
  store_add(g.c[idx(blk)].v, g.q, p, m.m);
  store_add(g.c[idx(blk)].d1, g.q, p, m.d1);
  store_add(g.c[idx(blk)].d2, g.q, p, m.d2);
}

template <int R1, int R2>
Pt<R1, R2> load_point(const Expanded& x, std::size_t p) {
  Pt<R1, R2> pt;
  load_bundle(x, p, kE1, pt.e1);
  load_bundle(x, p, kE2, pt.e2);
  load_morph(x, p, Block::phi, pt.phi);
  load_morph(x, p, Block::psi, pt.psi);
  return pt;
}

template <int R1, int R2>
void store_point(Expanded& g, std::size_t p, const Pt<R1, R2>& pt) {
  store_bundle(g, p, kE1, pt.e1);
  store_bundle(g, p, kE2, pt.e2);
  store_morph(g, p, Block::phi, pt.phi);
  store_morph(g, p, Block::psi, pt.psi);
}

template <class MA>
struct Hs {
  MA cx, cy, R;
};

template <class MA>
Hs<MA> hitchin_simpson(const BundlePt<MA>& b) {
  Hs<MA> h;
  h.cx = b.ax + b.th + b.th.adjoint();
  h.cy = b.ay + kI * (b.th - b.th.adjoint());
  const MA d1cy = b.d1ay + kI * (b.d1th - b.d1th.adjoint());
  const MA d2cx = b.d2ax + b.d2th + b.d2th.adjoint();
  h.R = d1cy - d2cx + h.cx * h.cy - h.cy * h.cx;
  return h;
}

// Given dE/dR, accumulate into the bundle's gradient slots.
template <class MA>
void hitchin_simpson_backward(const Hs<MA>& h, const MA& gR, BundlePt<MA>& g) {
  const MA gcx = gR * h.cy.adjoint() - h.cy.adjoint() * gR;
  const MA gcy = h.cx.adjoint() * gR - gR * h.cx.adjoint();
  g.ax += gcx;
  g.ay += gcy;
  g.th += gcx + gcx.adjoint() - kI * gcy - kI * gcy.adjoint();
  g.d1ay += gR;
  g.d2ax -= gR;
  g.d1th += -kI * gR - kI * gR.adjoint();
  g.d2th -= gR + gR.adjoint();
}

template <class MM>
struct Hol {
  MM H;  // (nabla_1 + i nabla_2) m
  MM T;  // Phi_a m - m Phi_b
};

// m: E_b -> E_a
template <class MM, class MA, class MB>
Hol<MM> holomorphic_terms(const MorphPt<MM>& m, const BundlePt<MA>& a, const BundlePt<MB>& b) {
  Hol<MM> t;
  t.H = (m.d1 + a.ax * m.m - m.m * b.ax) + kI * (m.d2 + a.ay * m.m - m.m * b.ay);
  t.T = a.th * m.m - m.m * b.th;
  return t;
}

template <class MM, class MA, class MB>
void holomorphic_backward(const MorphPt<MM>& m, const BundlePt<MA>& a, const BundlePt<MB>& b,
                          const MM& gH, const MM& gT, MorphPt<MM>& gm, BundlePt<MA>& ga,
                          BundlePt<MB>& gb) {
  gm.d1 += gH;
  gm.d2 += -kI * gH;
  ga.ax += gH * m.m.adjoint();
  ga.ay += -kI * gH * m.m.adjoint();
  gb.ax -= m.m.adjoint() * gH;
  gb.ay += kI * m.m.adjoint() * gH;
  gm.m += a.ax.adjoint() * gH - gH * b.ax.adjoint() - kI * a.ay.adjoint() * gH +
          kI * gH * b.ay.adjoint();
  ga.th += gT * m.m.adjoint();
  gb.th -= m.m.adjoint() * gT;
  gm.m += a.th.adjoint() * gT - gT * b.th.adjoint();
}

template <int R1, int R2>
struct ResidualTerms {
  using P = Pt<R1, R2>;
  Hs<typename P::M11> h1;
  Hs<typename P::M22> h2;
  typename P::M11 Q1;
  typename P::M22 Q2;
  Hol<typename P::M12> phi;
  Hol<typename P::M21> psi;
  double density = 0;
};

template <int R1, int R2>
ResidualTerms<R1, R2> residual_terms(const Pt<R1, R2>& x, double tau, double tau_p) {
  using P = Pt<R1, R2>;
  ResidualTerms<R1, R2> r;
  r.h1 = hitchin_simpson(x.e1);
  r.h2 = hitchin_simpson(x.e2);
  const auto& phi = x.phi.m;
  const auto& psi = x.psi.m;
  r.Q1 = kI * r.h1.R + 0.5 * phi * phi.adjoint() - 0.5 * psi.adjoint() * psi -
         (tau / 2) * P::M11::Identity();
  r.Q2 = kI * r.h2.R - 0.5 * phi.adjoint() * phi + 0.5 * psi * psi.adjoint() -
         (tau_p / 2) * P::M22::Identity();
  r.phi = holomorphic_terms(x.phi, x.e1, x.e2);
  r.psi = holomorphic_terms(x.psi, x.e2, x.e1);
  r.density = r.Q1.squaredNorm() + r.Q2.squaredNorm() + r.phi.H.squaredNorm() +
              4.0 * r.phi.T.squaredNorm() + r.psi.H.squaredNorm() + 4.0 * r.psi.T.squaredNorm();
  return r;
}

template <int R1, int R2>
void residual_backward(const Pt<R1, R2>& x, const ResidualTerms<R1, R2>& r, double w,
                       Pt<R1, R2>& g) {
  using P = Pt<R1, R2>;
  const typename P::M11 g1 = 2.0 * w * r.Q1;
  const typename P::M22 g2 = 2.0 * w * r.Q2;
  const typename P::M11 s1 = g1 + g1.adjoint();
  const typename P::M22 s2 = g2 + g2.adjoint();
  g.phi.m += 0.5 * s1 * x.phi.m - 0.5 * x.phi.m * s2;
  g.psi.m += -0.5 * x.psi.m * s1 + 0.5 * s2 * x.psi.m;
  hitchin_simpson_backward(r.h1, typename P::M11(-kI * g1), g.e1);
  hitchin_simpson_backward(r.h2, typename P::M22(-kI * g2), g.e2);
  holomorphic_backward(x.phi, x.e1, x.e2, typename P::M12(2.0 * w * r.phi.H),
                       typename P::M12(8.0 * w * r.phi.T), g.phi, g.e1, g.e2);
  holomorphic_backward(x.psi, x.e2, x.e1, typename P::M21(2.0 * w * r.psi.H),
                       typename P::M21(8.0 * w * r.psi.T), g.psi, g.e2, g.e1);
}

template <int R1, int R2>
double ymh_density(const Pt<R1, R2>& x, double tau, double tau_p, double deviation_sign) {
  using P = Pt<R1, R2>;
  const auto h1 = hitchin_simpson(x.e1);
  const auto h2 = hitchin_simpson(x.e2);
  const auto& phi = x.phi.m;
  const auto& psi = x.psi.m;
  const typename P::M12 Dphi1 = x.phi.d1 + h1.cx * phi - phi * h2.cx;
  const typename P::M12 Dphi2 = x.phi.d2 + h1.cy * phi - phi * h2.cy;
  const typename P::M21 Dpsi1 = x.psi.d1 + h2.cx * psi - psi * h1.cx;
  const typename P::M21 Dpsi2 = x.psi.d2 + h2.cy * psi - psi * h1.cy;
  const typename P::M11 dev1 =
      phi * phi.adjoint() - psi.adjoint() * psi - deviation_sign * tau * P::M11::Identity();
  const typename P::M22 dev2 = psi * psi.adjoint() - phi.adjoint() * phi - tau_p * P::M22::Identity();
  return h1.R.squaredNorm() + h2.R.squaredNorm() + Dphi1.squaredNorm() + Dphi2.squaredNorm() +
         Dpsi1.squaredNorm() + Dpsi2.squaredNorm() + 0.25 * dev1.squaredNorm() +
         0.25 * dev2.squaredNorm();
}

// B = (d1 + i d2) Phi + [A_x + i A_y, Phi]
template <class MA>
MA integrability(const BundlePt<MA>& b) {
  const MA a = b.ax + kI * b.ay;
  return b.d1th + kI * b.d2th + a * b.th - b.th * a;
}

template <class M>
double re_inner(const M& a, const M& b) {
  return (a.adjoint() * b).trace().real();
}

template <int R1, int R2>
double pairing_density(const Pt<R1, R2>& x) {
  const auto b1 = integrability(x.e1);
  const auto b2 = integrability(x.e2);
  const auto& phi = x.phi.m;
  const auto& psi = x.psi.m;
  using P = Pt<R1, R2>;
  const typename P::M12 u = b1 * phi - phi * b2;
  const typename P::M21 v = b2 * psi - psi * b1;
  return -2.0 * re_inner(u, phi) - 2.0 * re_inner(v, psi);
}

template <int R1, int R2>
double defect_density(const Pt<R1, R2>& x) {
  return integrability(x.e1).squaredNorm() + integrability(x.e2).squaredNorm();
}

template <int R1, int R2>
void l4_densities(const Pt<R1, R2>& x, double tau, double& d1, double& d2) {
  using P = Pt<R1, R2>;
  const auto& e1 = x.e1;
  const auto& e2 = x.e2;
  const auto& s = x.phi.m;
  const typename P::M12 del = (x.phi.d1 + e1.ax * s - s * e2.ax) - kI * (x.phi.d2 + e1.ay * s - s * e2.ay);
  const typename P::M12 theta_star_s = e1.th.adjoint() * s - s * e2.th.adjoint();
  const double s2 = s.squaredNorm();
  d1 = 2.0 * (0.5 * del.squaredNorm()) + 2.0 * (2.0 * theta_star_s.squaredNorm()) + s2 * s2 -
       tau * s2;

  const typename P::M11 n1 = e1.d1th + e1.ax * e1.th - e1.th * e1.ax;
  const typename P::M11 n2 = e1.d2th + e1.ay * e1.th - e1.th * e1.ay;
  const typename P::M11 del_theta = n1 - kI * n2;
  const typename P::M11 comm = e1.th * e1.th.adjoint() - e1.th.adjoint() * e1.th;
  d2 = 2.0 * del_theta.squaredNorm() + 2.0 * (4.0 * comm.squaredNorm()) +
       2.0 * (2.0 * (s.adjoint() * e1.th).squaredNorm());
}

// Calls f.template operator()<R1, R2>() for runtime ranks.
template <class F>
decltype(auto) dispatch(int r1, int r2, F&& f) {
  static_assert(lattice::kMaxRank == 3);
  auto inner = [&]<int R1>() -> decltype(auto) {
    switch (r2) {
      case 1: return f.template operator()<R1, 1>();
      case 2: return f.template operator()<R1, 2>();
      default: return f.template operator()<R1, 3>();
    }
  };
  switch (r1) {
    case 1: return inner.template operator()<1>();
    case 2: return inner.template operator()<2>();
    default: return inner.template operator()<3>();
  }
}

}  // namespace

Model::Model(VortexParams p, int N, Scheme scheme, Fault fault)
    : p_(p), ops_(scheme, N, (validate(p), p.side())), fault_(fault) {}

void Model::check_state(const LatticeState& s) const {
  if (s.N != ops_.N() || s.r1 != p_.r1 || s.r2 != p_.r2) {
    throw std::invalid_argument("lattice state does not match the model (grid size or ranks)");
  }
  if (std::abs(s.L - ops_.L()) > 1e-12 * ops_.L()) {
    throw std::invalid_argument("lattice side length does not match sqrt(vol)");
  }
}

double Model::ymh_energy(const LatticeState& s) {
  check_state(s);
  const Expanded x = expand(ops_, s);
  const double sign = fault_ == Fault::flip_deviation_sign ? -1.0 : 1.0;
  const double tau = p_.tau;
  const double tau_p = p_.tau_prime();
  const double sum = dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    double acc = 0.0;
    for (std::size_t p = 0; p < x.q; ++p) {
      acc += ymh_density(load_point<R1, R2>(x, p), tau, tau_p, sign);
    }
    return acc;
  });
  return sum * ops_.weight();
}

double Model::residual_energy(const LatticeState& s) {
  check_state(s);
  const Expanded x = expand(ops_, s);
  const double tau = p_.tau;
  const double tau_p = p_.tau_prime();
  const double sum = dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    double acc = 0.0;
    for (std::size_t p = 0; p < x.q; ++p) {
      acc += residual_terms(load_point<R1, R2>(x, p), tau, tau_p).density;
    }
    return acc;
  });
  return sum * ops_.weight();
}

double Model::residual_energy(const LatticeState& s, LatticeState& grad) {
  check_state(s);
  const Expanded x = expand(ops_, s);
  Expanded g = zero_like(x);
  const double w = ops_.weight();
  const double tau = p_.tau;
  const double tau_p = p_.tau_prime();
  const double sum = dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    double acc = 0.0;
    Pt<R1, R2> gp;
    for (std::size_t p = 0; p < x.q; ++p) {
      const Pt<R1, R2> pt = load_point<R1, R2>(x, p);
      const auto r = residual_terms(pt, tau, tau_p);
      acc += r.density;
      gp.zero();
      residual_backward(pt, r, w, gp);
      store_point(g, p, gp);
    }
    return acc;
  });
  grad = lattice::zero_like(s);
  contract(ops_, g, grad);
  return sum * w;
}

double Model::integrability_pairing(const LatticeState& s) {
  check_state(s);
  const Expanded x = expand(ops_, s);
  const double sum = dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    double acc = 0.0;
    for (std::size_t p = 0; p < x.q; ++p) acc += pairing_density(load_point<R1, R2>(x, p));
    return acc;
  });
  return sum * ops_.weight();
}

double Model::integrability_defect(const LatticeState& s) {
  check_state(s);
  const Expanded x = expand(ops_, s);
  const double sum = dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    double acc = 0.0;
    for (std::size_t p = 0; p < x.q; ++p) acc += defect_density(load_point<R1, R2>(x, p));
    return acc;
  });
  return sum * ops_.weight();
}

ResidualBreakdown Model::breakdown(const LatticeState& s) {
  check_state(s);
  const Expanded x = expand(ops_, s);
  const double w = ops_.weight();
  const double tau = p_.tau;
  const double tau_p = p_.tau_prime();
  return dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    ResidualBreakdown b;
    for (std::size_t p = 0; p < x.q; ++p) {
      const Pt<R1, R2> pt = load_point<R1, R2>(x, p);
      const auto r = residual_terms(pt, tau, tau_p);
      const double hol_phi = 0.5 * r.phi.H.squaredNorm() + 2.0 * r.phi.T.squaredNorm();
      const double hol_psi = 0.5 * r.psi.H.squaredNorm() + 2.0 * r.psi.T.squaredNorm();
      b.eq1 += w * r.Q1.squaredNorm();
      b.eq2 += w * r.Q2.squaredNorm();
      b.holomorphicity += w * 2.0 * (hol_phi + hol_psi);
      b.eq1_max = std::max(b.eq1_max, r.Q1.norm());
      b.eq2_max = std::max(b.eq2_max, r.Q2.norm());
      b.holomorphicity_max =
          std::max({b.holomorphicity_max, std::sqrt(hol_phi), std::sqrt(hol_psi)});
      b.theta_s_sup = std::max({b.theta_s_sup, r.phi.T.norm(), r.psi.T.norm()});
      b.moment_map += w * 2.0 * pt.e1.th.squaredNorm();
      b.half_section_l2 += w * 0.5 * (pt.phi.m.squaredNorm() + pt.psi.m.squaredNorm());
    }
    return b;
  });
}

L4Residuals Model::l4_terms(const LatticeState& s) {
  check_state(s);
  if (s.branch != lattice::Branch::phi) {
    throw std::invalid_argument("the L4 identities are stated for the section phi of E1");
  }
  const Expanded x = expand(ops_, s);
  const double tau = p_.tau;
  const double w = ops_.weight();
  return dispatch(p_.r1, p_.r2, [&]<int R1, int R2>() {
    double sum1 = 0.0;
    double sum2 = 0.0;
    for (std::size_t p = 0; p < x.q; ++p) {
      double a = 0.0;
      double b = 0.0;
      l4_densities(load_point<R1, R2>(x, p), tau, a, b);
      sum1 += a;
      sum2 += b;
    }
    return L4Residuals{std::abs(sum1 * w), std::abs(sum2 * w)};
  });
}

double decomposition_check(Model& m, const LatticeState& s) {
  const double ymh = m.ymh_energy(s);
  const double res = m.residual_energy(s);
  return std::abs(ymh - res) / (1.0 + ymh);
}

std::string to_string(Coupling c) {
  return c == Coupling::higgs_pair ? "higgs_pair" : "doubly_coupled";
}

Coupling parse_coupling(const std::string& s) {
  if (s == "higgs_pair") return Coupling::higgs_pair;
  if (s == "doubly_coupled") return Coupling::doubly_coupled;
  throw ParameterError("unknown coupling '" + s + "' (expected higgs_pair or doubly_coupled)");
}

namespace {

void zero_block(LatticeState& s, Block b) {
  for (Mat& m : s[b]) m.setZero();
}

std::vector<Block> frozen_blocks(lattice::Branch branch, const SolveOptions& opt) {
  std::vector<Block> out;
  out.push_back(branch == lattice::Branch::phi ? Block::psi : Block::phi);
  if (opt.coupling == Coupling::higgs_pair) {
    out.insert(out.end(), {Block::A2x, Block::A2y, Block::theta2});
  }
  return out;
}

// Applies the H^1-type smoother entrywise to every block.
LatticeState precondition(spectral::GridOperator& ops, const LatticeState& g) {
  LatticeState out = g;
  const std::size_t n = g.sites();
  std::vector<cplx> buf(n);
  for (Block b : lattice::kAllBlocks) {
    auto [rows, cols] = g.shape(b);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        for (std::size_t site = 0; site < n; ++site) buf[site] = g[b][site](i, j);
        ops.precondition(buf.data());
        for (std::size_t site = 0; site < n; ++site) out[b][site](i, j) = buf[site];
      }
    }
  }
  return out;
}

}  // namespace

void apply_mask(LatticeState& grad, const SolveOptions& opt) {
  for (Block b : frozen_blocks(grad.branch, opt)) zero_block(grad, b);
}

LatticeState Model::descent_direction(const LatticeState& grad) {
  LatticeState d = precondition(ops_, grad);
  const double a2 = grad.spacing() * grad.spacing();
  for (Block b : lattice::kAllBlocks) {
    for (Mat& m : d[b]) m *= -1.0 / a2;
  }
  return d;
}

StepResult flow_step(Model& m, const LatticeState& s, double residual, const LatticeState& grad,
                     double trial_step, const SolveOptions& opt) {
  const LatticeState dir = m.descent_direction(grad);
  const double slope = lattice::inner(grad, dir);  // < 0
  double t = trial_step;
  for (int k = 0; k <= opt.max_backtracks; ++k) {
    LatticeState trial = lattice::axpy(s, t, dir);
    const double e = m.residual_energy(trial);
    if (std::isfinite(e) && e <= residual + opt.armijo * t * slope) {
      return {std::move(trial), e, t, true};
    }
    t *= opt.backtrack;
  }
  return {s, residual, 0.0, false};
}

SolveResult solve(Model& m, LatticeState s, const SolveOptions& opt) {
  if (opt.tol < 0 || opt.max_iter < 0) throw ParameterError("tol and max_iter must be nonnegative");
  for (Block b : frozen_blocks(s.branch, opt)) zero_block(s, b);

  SolveResult out;
  LatticeState grad;
  double e = m.residual_energy(s, grad);
  apply_mask(grad, opt);
  // Unit step in the smoothed metric is of the order of the inverse stiffness
  // of the lowest modes; Armijo adapts from there.
  const double k0 = 2.0 * kPi / s.L;
  double step = 0.5 / (k0 * k0);
  int it = 0;
  out.stop_reason = "max_iter";
  for (; it < opt.max_iter; ++it) {
    if (e <= opt.tol) break;
    if (lattice::norm2(grad) == 0.0) {
      out.stop_reason = "zero_gradient";
      break;
    }
    StepResult r = flow_step(m, s, e, grad, step, opt);
    if (!r.ok) {
      out.stop_reason = "line_search_failed";
      break;
    }
    if (r.residual > e) out.monotone = false;
    s = std::move(r.state);
    step = opt.step_growth * r.step;
    e = m.residual_energy(s, grad);
    apply_mask(grad, opt);
  }
  out.converged = e <= opt.tol;
  if (out.converged) out.stop_reason = "converged";
  out.iterations = it;
  out.residual = e;
  out.diagnostics = m.breakdown(s);
  out.moment_map_value = out.diagnostics.moment_map;
  out.state = std::move(s);
  return out;
}

L4Residuals l4_identity_check(Model& m, const LatticeState& s, double tol, Scheme evaluation) {
  const double e = m.residual_energy(s);
  if (!(e <= tol)) {
    throw std::runtime_error("L4 identities need a converged state: residual " +
                             std::to_string(e) + " > tol " + std::to_string(tol));
  }
  if (evaluation == m.scheme()) return m.l4_terms(s);
  Model eval(m.params(), m.N(), evaluation);
  return eval.l4_terms(s);
}

double obstruction_floor(const VortexParams& p) {
  return p.tau < 0 ? p.tau * p.tau * p.r1 * p.vol / 4.0 : 0.0;
}

}  // namespace higgs::vortex
