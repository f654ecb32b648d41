#include "higgs/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace higgs::spectral {

std::string to_string(Scheme s) { return s == Scheme::spectral ? "spectral" : "central"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "spectral") return Scheme::spectral;
  if (s == "central") return Scheme::central;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected spectral or central)");
}

struct GridOperator::Plans {
  fftw_complex* cin = nullptr;
  fftw_complex* cout = nullptr;
  fftw_complex* fin = nullptr;
  fftw_complex* fout = nullptr;
  fftw_plan fwd_n = nullptr;
  fftw_plan bwd_n = nullptr;
  fftw_plan fwd_m = nullptr;
  fftw_plan bwd_m = nullptr;

  ~Plans() {
    for (fftw_plan p : {fwd_n, bwd_n, fwd_m, bwd_m}) {
      if (p) fftw_destroy_plan(p);
    }
    for (fftw_complex* b : {cin, cout, fin, fout}) {
      if (b) fftw_free(b);
    }
  }
};

namespace {

int signed_mode(int index, int n) { return index <= (n - 1) / 2 ? index : index - n; }

cplx* as_cplx(fftw_complex* p) { return reinterpret_cast<cplx*>(p); }

}  // namespace

GridOperator::GridOperator(Scheme scheme, int N, double L)
    : scheme_(scheme), N_(N), M_(scheme == Scheme::spectral ? 3 * N : N), L_(L) {
  if (N < 2) throw std::invalid_argument("grid size must be at least 2");
  if (!(L > 0)) throw std::invalid_argument("side length must be positive");

  plans_ = std::make_unique<Plans>();
  const std::size_t nn = static_cast<std::size_t>(N_) * N_;
  plans_->cin = fftw_alloc_complex(nn);
  plans_->cout = fftw_alloc_complex(nn);
  // FFTW_ESTIMATE keeps the chosen algorithm, and hence rounding, reproducible.
  plans_->fwd_n = fftw_plan_dft_2d(N_, N_, plans_->cin, plans_->cout, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd_n = fftw_plan_dft_2d(N_, N_, plans_->cin, plans_->cout, FFTW_BACKWARD, FFTW_ESTIMATE);
  coarse_hat_.resize(nn);

  const double w = 2.0 * std::numbers::pi / L_;
  const double a = L_ / N_;
  smoother_.resize(nn);
  for (int p = 0; p < N_; ++p) {
    for (int q = 0; q < N_; ++q) {
      double lambda;
      if (scheme_ == Scheme::spectral) {
        const double kp = w * signed_mode(p, N_);
        const double kq = w * signed_mode(q, N_);
        lambda = kp * kp + kq * kq;
      } else {
        const double sp = std::sin(std::numbers::pi * p / N_) * 2.0 / a;
        const double sq = std::sin(std::numbers::pi * q / N_) * 2.0 / a;
        lambda = sp * sp + sq * sq;
      }
      smoother_[p * N_ + q] = 1.0 / (1.0 + lambda / (w * w));
    }
  }
  if (scheme_ == Scheme::central) return;

  const std::size_t mm = static_cast<std::size_t>(M_) * M_;
  plans_->fin = fftw_alloc_complex(mm);
  plans_->fout = fftw_alloc_complex(mm);
  plans_->fwd_m = fftw_plan_dft_2d(M_, M_, plans_->fin, plans_->fout, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd_m = fftw_plan_dft_2d(M_, M_, plans_->fin, plans_->fout, FFTW_BACKWARD, FFTW_ESTIMATE);
  fine_hat_.resize(mm);
  fine_tmp_.resize(mm);
  k_.resize(M_);
  for (int i = 0; i < M_; ++i) k_[i] = cplx(0.0, w * signed_mode(i, M_));
}

void GridOperator::precondition(cplx* coarse) {
  const std::size_t nn = static_cast<std::size_t>(N_) * N_;
  std::copy(coarse, coarse + nn, as_cplx(plans_->cin));
  fftw_execute(plans_->fwd_n);
  const double scale = 1.0 / static_cast<double>(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    as_cplx(plans_->cin)[i] = as_cplx(plans_->cout)[i] * (smoother_[i] * scale);
  }
  fftw_execute(plans_->bwd_n);
  std::copy(as_cplx(plans_->cout), as_cplx(plans_->cout) + nn, coarse);
}

GridOperator::~GridOperator() = default;

// Coarse mode p maps to fine mode p; for even N the Nyquist mode N/2 is split
// in half between +N/2 and -N/2 along each axis where it occurs.
void GridOperator::pad(const cplx* coarse_hat, cplx* fine_hat) const {
  std::fill(fine_hat, fine_hat + static_cast<std::size_t>(M_) * M_, cplx(0.0));
  const bool even = N_ % 2 == 0;
  for (int p = 0; p < N_; ++p) {
    const int kp = signed_mode(p, N_);
    const bool nyq_p = even && p == N_ / 2;
    for (int q = 0; q < N_; ++q) {
      const int kq = signed_mode(q, N_);
      const bool nyq_q = even && q == N_ / 2;
      const cplx c = coarse_hat[p * N_ + q];
      const int ps[2] = {kp, -kp};
      const int qs[2] = {kq, -kq};
      const int np = nyq_p ? 2 : 1;
      const int nq = nyq_q ? 2 : 1;
      const double share = 1.0 / (np * nq);
      for (int a = 0; a < np; ++a) {
        for (int b = 0; b < nq; ++b) {
          const int fp = (ps[a] + M_) % M_;
          const int fq = (qs[b] + M_) % M_;
          fine_hat[fp * M_ + fq] += share * c;
        }
      }
    }
  }
}

void GridOperator::unpad_add(const cplx* fine_hat, cplx* coarse_hat) const {
  const bool even = N_ % 2 == 0;
  for (int p = 0; p < N_; ++p) {
    const int kp = signed_mode(p, N_);
    const bool nyq_p = even && p == N_ / 2;
    for (int q = 0; q < N_; ++q) {
      const int kq = signed_mode(q, N_);
      const bool nyq_q = even && q == N_ / 2;
      const int ps[2] = {kp, -kp};
      const int qs[2] = {kq, -kq};
      const int np = nyq_p ? 2 : 1;
      const int nq = nyq_q ? 2 : 1;
      const double share = 1.0 / (np * nq);
      cplx sum = 0.0;
      for (int a = 0; a < np; ++a) {
        for (int b = 0; b < nq; ++b) {
          sum += fine_hat[((ps[a] + M_) % M_) * M_ + (qs[b] + M_) % M_];
        }
      }
      coarse_hat[p * N_ + q] += share * sum;
    }
  }
}

void GridOperator::forward(const cplx* coarse, cplx* val, cplx* d1, cplx* d2) {
  const int n = N_;
  if (scheme_ == Scheme::central) {
    const double inv = 1.0 / (2.0 * L_ / n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      for (int j = 0; j < n; ++j) {
        const int jp = (j + 1) % n;
        const int jm = (j + n - 1) % n;
        if (val) val[i * n + j] = coarse[i * n + j];
        if (d1) d1[i * n + j] = (coarse[ip * n + j] - coarse[im * n + j]) * inv;
        if (d2) d2[i * n + j] = (coarse[i * n + jp] - coarse[i * n + jm]) * inv;
      }
    }
    return;
  }

  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t mm = static_cast<std::size_t>(M_) * M_;
  std::copy(coarse, coarse + nn, as_cplx(plans_->cin));
  fftw_execute(plans_->fwd_n);
  const double scale = 1.0 / static_cast<double>(nn);
  for (std::size_t i = 0; i < nn; ++i) coarse_hat_[i] = as_cplx(plans_->cout)[i] * scale;
  pad(coarse_hat_.data(), fine_hat_.data());

  auto synth = [&](cplx* out, int axis) {
    cplx* fin = as_cplx(plans_->fin);
    for (int p = 0; p < M_; ++p) {
      for (int q = 0; q < M_; ++q) {
        const cplx f = fine_hat_[p * M_ + q];
        fin[p * M_ + q] = axis == 0 ? f : f * (axis == 1 ? k_[p] : k_[q]);
      }
    }
    fftw_execute(plans_->bwd_m);
    std::copy(as_cplx(plans_->fout), as_cplx(plans_->fout) + mm, out);
  };
  if (val) synth(val, 0);
  if (d1) synth(d1, 1);
  if (d2) synth(d2, 2);
}

void GridOperator::adjoint(const cplx* gval, const cplx* gd1, const cplx* gd2, cplx* coarse_out) {
  const int n = N_;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (scheme_ == Scheme::central) {
    // D^* = -D for periodic central differences.
    const double inv = 1.0 / (2.0 * L_ / n);
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      for (int j = 0; j < n; ++j) {
        const int jp = (j + 1) % n;
        const int jm = (j + n - 1) % n;
        cplx v = gval ? gval[i * n + j] : cplx(0.0);
        if (gd1) v -= (gd1[ip * n + j] - gd1[im * n + j]) * inv;
        if (gd2) v -= (gd2[i * n + jp] - gd2[i * n + jm]) * inv;
        coarse_out[i * n + j] = v;
      }
    }
    return;
  }

  const std::size_t mm = static_cast<std::size_t>(M_) * M_;
  std::fill(fine_tmp_.begin(), fine_tmp_.end(), cplx(0.0));
  auto analyse = [&](const cplx* g, int axis) {
    std::copy(g, g + mm, as_cplx(plans_->fin));
    fftw_execute(plans_->fwd_m);
    const cplx* h = as_cplx(plans_->fout);
    for (int p = 0; p < M_; ++p) {
      for (int q = 0; q < M_; ++q) {
        const cplx f = h[p * M_ + q];
        fine_tmp_[p * M_ + q] += axis == 0 ? f : f * std::conj(axis == 1 ? k_[p] : k_[q]);
      }
    }
  };
  if (gval) analyse(gval, 0);
  if (gd1) analyse(gd1, 1);
  if (gd2) analyse(gd2, 2);

  std::fill(coarse_hat_.begin(), coarse_hat_.end(), cplx(0.0));
  unpad_add(fine_tmp_.data(), coarse_hat_.data());
  std::copy(coarse_hat_.begin(), coarse_hat_.end(), as_cplx(plans_->cin));
  fftw_execute(plans_->bwd_n);
  const double scale = 1.0 / static_cast<double>(nn);
  for (std::size_t i = 0; i < nn; ++i) coarse_out[i] = as_cplx(plans_->cout)[i] * scale;
}

}  // namespace higgs::spectral
