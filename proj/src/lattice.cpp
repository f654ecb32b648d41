#include "higgs/lattice.hpp"

#include <Eigen/QR>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace higgs::lattice {

std::string to_string(Block b) {
  switch (b) {
    case Block::A1x: return "A1x";
    case Block::A1y: return "A1y";
    case Block::A2x: return "A2x";
    case Block::A2y: return "A2y";
    case Block::theta1: return "theta1";
    case Block::theta2: return "theta2";
    case Block::phi: return "phi";
    case Block::psi: return "psi";
  }
  return "?";
}

bool is_connection(Block b) {
  return b == Block::A1x || b == Block::A1y || b == Block::A2x || b == Block::A2y;
}

std::string to_string(Branch b) { return b == Branch::phi ? "phi" : "psi"; }

Branch parse_branch(const std::string& s) {
  if (s == "phi") return Branch::phi;
  if (s == "psi") return Branch::psi;
  throw std::invalid_argument("unknown branch '" + s + "' (expected phi or psi)");
}

std::pair<int, int> LatticeState::shape(Block b) const {
  switch (b) {
    case Block::A1x:
    case Block::A1y:
    case Block::theta1: return {r1, r1};
    case Block::A2x:
    case Block::A2y:
    case Block::theta2: return {r2, r2};
    case Block::phi: return {r1, r2};
    case Block::psi: return {r2, r1};
  }
  return {0, 0};
}

LatticeState zero_state(int N, double L, int r1, int r2, Branch branch) {
  if (N < 2) throw std::invalid_argument("grid size must be at least 2");
  if (!(L > 0)) throw std::invalid_argument("torus side length must be positive");
  if (r1 < 1 || r2 < 1 || r1 > kMaxRank || r2 > kMaxRank) {
    throw std::invalid_argument("ranks must lie in [1, " + std::to_string(kMaxRank) + "]");
  }
  LatticeState s;
  s.N = N;
  s.L = L;
  s.r1 = r1;
  s.r2 = r2;
  s.branch = branch;
  for (Block b : kAllBlocks) {
    auto [rows, cols] = s.shape(b);
    s[b].assign(s.sites(), Mat::Zero(rows, cols));
  }
  return s;
}

LatticeState zero_like(const LatticeState& s) {
  return zero_state(s.N, s.L, s.r1, s.r2, s.branch);
}

Mat anti_hermitian_part(const Mat& X) { return (X - X.adjoint()) / 2.0; }

namespace {

Mat gaussian(int rows, int cols, double amp, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      m(i, j) = amp * cplx(re, im);
    }
  }
  return m;
}

bool inactive(Branch branch, Block b) {
  return (branch == Branch::phi && b == Block::psi) || (branch == Branch::psi && b == Block::phi);
}

Mat random_unitary(int r, std::mt19937_64& rng) {
  Eigen::MatrixXcd g = gaussian(r, r, 1.0, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return Mat(qr.householderQ() * Eigen::MatrixXcd::Identity(r, r));
}

}  // namespace

LatticeState random_state(int N, double L, int r1, int r2, Branch branch, double amp,
                          std::mt19937_64& rng) {
  LatticeState s = zero_state(N, L, r1, r2, branch);
  for (Block b : kAllBlocks) {
    if (inactive(branch, b)) continue;
    auto [rows, cols] = s.shape(b);
    for (auto& m : s[b]) {
      m = gaussian(rows, cols, amp, rng);
      if (is_connection(b)) m = anti_hermitian_part(m);
    }
  }
  return s;
}

LatticeState random_integrable_state(int N, double L, int r1, int r2, Branch branch, double amp,
                                     std::mt19937_64& rng) {
  LatticeState s = random_state(N, L, r1, r2, branch, amp, rng);
  std::normal_distribution<double> n(0.0, 1.0);
  auto fix_bundle = [&](int r, Block ax, Block ay, Block th) {
    const Mat u = random_unitary(r, rng);
    Mat eig = Mat::Zero(r, r);
    for (int j = 0; j < r; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      eig(j, j) = amp * cplx(re, im);
    }
    const Mat theta = u * eig * u.adjoint();
    for (auto& m : s[th]) m = theta;
    for (Block b : {ax, ay}) {
      for (auto& m : s[b]) {
        Mat diag = Mat::Zero(r, r);
        for (int j = 0; j < r; ++j) diag(j, j) = cplx(0.0, amp * n(rng));
        m = u * diag * u.adjoint();
      }
    }
  };
  fix_bundle(r1, Block::A1x, Block::A1y, Block::theta1);
  fix_bundle(r2, Block::A2x, Block::A2y, Block::theta2);
  return s;
}

LatticeState smooth_state(int N, double L, int r1, int r2, Branch branch, int modes, double amp,
                          double offset, std::uint64_t seed) {
  LatticeState s = zero_state(N, L, r1, r2, branch);
  std::mt19937_64 rng(seed);
  const int width = 2 * modes + 1;
  for (Block b : kAllBlocks) {
    auto [rows, cols] = s.shape(b);
    // Coefficients first, grid second: the draw order never depends on N.
    std::vector<Mat> coeff;
    coeff.reserve(width * width);
    for (int m = 0; m < width * width; ++m) {
      const int kx = m / width - modes;
      const int ky = m % width - modes;
      const double damp = 1.0 / (1.0 + kx * kx + ky * ky);
      coeff.push_back(gaussian(rows, cols, amp * damp, rng));
    }
    if (inactive(branch, b)) continue;
    const double w = 2.0 * std::numbers::pi / L;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const double x = i * L / N;
        const double y = j * L / N;
        Mat v = Mat::Zero(rows, cols);
        for (int m = 0; m < width * width; ++m) {
          const int kx = m / width - modes;
          const int ky = m % width - modes;
          v += coeff[m] * std::exp(cplx(0.0, w * (kx * x + ky * y)));
        }
        if (is_connection(b)) v = anti_hermitian_part(v);
        if ((b == Block::phi || b == Block::psi)) v(0, 0) += offset;
        s[b][i * N + j] = v;
      }
    }
  }
  return s;
}

double inner(const LatticeState& a, const LatticeState& b) {
  double sum = 0.0;
  for (Block blk : kAllBlocks) {
    const Field& fa = a[blk];
    const Field& fb = b[blk];
    for (std::size_t i = 0; i < fa.size(); ++i) {
      sum += (fa[i].adjoint() * fb[i]).trace().real();
    }
  }
  return sum;
}

double norm2(const LatticeState& a) { return inner(a, a); }

LatticeState axpy(const LatticeState& a, double t, const LatticeState& b) {
  LatticeState out = a;
  for (Block blk : kAllBlocks) {
    Field& fo = out[blk];
    const Field& fb = b[blk];
    for (std::size_t i = 0; i < fo.size(); ++i) fo[i] += t * fb[i];
  }
  return out;
}

LatticeState gauge_transform(const LatticeState& s, const Mat& g1, const Mat& g2) {
  LatticeState out = s;
  auto conj = [](Field& f, const Mat& left, const Mat& right) {
    for (auto& m : f) m = left.adjoint() * m * right;
  };
  conj(out[Block::A1x], g1, g1);
  conj(out[Block::A1y], g1, g1);
  conj(out[Block::theta1], g1, g1);
  conj(out[Block::A2x], g2, g2);
  conj(out[Block::A2y], g2, g2);
  conj(out[Block::theta2], g2, g2);
  conj(out[Block::phi], g1, g2);
  conj(out[Block::psi], g2, g1);
  return out;
}

namespace {

constexpr char kMagic[8] = {'H', 'I', 'G', 'G', 'S', 'L', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("field dump truncated");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

void dump_fields(const LatticeState& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  put<std::int32_t>(out, s.N);
  put<std::int32_t>(out, s.r1);
  put<std::int32_t>(out, s.r2);
  put<double>(out, s.L);
  put<std::uint32_t>(out, kBlockCount);
  for (Block b : kAllBlocks) {
    const std::string name = to_string(b);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    auto [rows, cols] = s.shape(b);
    put<std::int32_t>(out, rows);
    put<std::int32_t>(out, cols);
    for (const Mat& m : s[b]) {
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          put<double>(out, m(i, j).real());
          put<double>(out, m(i, j).imag());
        }
      }
    }
  }
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

LatticeState load_fields(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw std::runtime_error(path + " is not a lattice field dump");
  }
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported dump version");
  const int N = get<std::int32_t>(in);
  const int r1 = get<std::int32_t>(in);
  const int r2 = get<std::int32_t>(in);
  const double L = get<double>(in);
  LatticeState s = zero_state(N, L, r1, r2);
  const auto count = get<std::uint32_t>(in);
  if (count != kBlockCount) throw std::runtime_error("unexpected field count in dump");
  for (Block b : kAllBlocks) {
    const auto len = get<std::uint32_t>(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (name != to_string(b)) throw std::runtime_error("unexpected field '" + name + "' in dump");
    const int rows = get<std::int32_t>(in);
    const int cols = get<std::int32_t>(in);
    if (std::pair{rows, cols} != s.shape(b)) throw std::runtime_error("field shape mismatch");
    for (Mat& m : s[b]) {
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          const double re = get<double>(in);
          const double im = get<double>(in);
          m(i, j) = cplx(re, im);
        }
      }
    }
  }
  bool psi_live = false;
  for (const Mat& m : s[Block::psi]) psi_live = psi_live || !m.isZero(0.0);
  s.branch = psi_live ? Branch::psi : Branch::phi;
  return s;
}

}  // namespace higgs::lattice
