#pragma once

// Periodic N x N lattice on the flat torus [0,L)^2 carrying the fields of the
// doubly-coupled vortex system on trivial bundles E1 (rank r1), E2 (rank r2).

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace higgs::lattice {

using cplx = std::complex<double>;
inline constexpr int kMaxRank = 3;
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxRank, kMaxRank>;
using Field = std::vector<Mat>;  // one matrix per site, row-major site order

// theta_i is the dz-coefficient of the Higgs field on E_i.
enum class Block { A1x, A1y, A2x, A2y, theta1, theta2, phi, psi };
inline constexpr int kBlockCount = 8;
inline constexpr std::array<Block, kBlockCount> kAllBlocks = {
    Block::A1x, Block::A1y, Block::A2x, Block::A2y,
    Block::theta1, Block::theta2, Block::phi, Block::psi};

std::string to_string(Block b);
bool is_connection(Block b);

// Which morphism is allowed to be nonzero: phi: E2 -> E1 or psi: E1 -> E2.
enum class Branch { phi, psi };
std::string to_string(Branch b);
Branch parse_branch(const std::string& s);

struct LatticeState {
  int N = 0;
  double L = 0.0;  // side length, vol = L^2
  int r1 = 1;
  int r2 = 1;
  Branch branch = Branch::phi;
  std::array<Field, kBlockCount> fields;

  double spacing() const { return L / N; }
  double vol() const { return L * L; }
  int sites() const { return N * N; }
  std::pair<int, int> shape(Block b) const;
  Field& operator[](Block b) { return fields[static_cast<int>(b)]; }
  const Field& operator[](Block b) const { return fields[static_cast<int>(b)]; }
};

// All fields zero.
LatticeState zero_state(int N, double L, int r1, int r2, Branch branch = Branch::phi);

// Same shapes as s, all entries zero. Used for gradients and directions.
LatticeState zero_like(const LatticeState& s);

// Site-wise Gaussian noise of size amp in every active block. Connection
// blocks are anti-Hermitian; the inactive morphism stays zero.
LatticeState random_state(int N, double L, int r1, int r2, Branch branch, double amp,
                          std::mt19937_64& rng);

// Random state on which the Higgs fields are holomorphic: theta_i constant and
// normal, A_i pointwise in the commutant of theta_i. Morphisms and the
// remaining connection components are unrestricted.
LatticeState random_integrable_state(int N, double L, int r1, int r2, Branch branch, double amp,
                                     std::mt19937_64& rng);

// Trigonometric polynomial with modes |k_i| <= modes, coefficients drawn from
// rng before any grid is touched, so equal seeds give samples of the same
// continuum configuration on every N. The active morphism gets `offset` added
// to its (0,0) entry.
LatticeState smooth_state(int N, double L, int r1, int r2, Branch branch, int modes, double amp,
                          double offset, std::uint64_t seed);

// Anti-Hermitian part (X - X^*)/2.
Mat anti_hermitian_part(const Mat& X);

// Re <a, b> summed over all blocks and sites (real Euclidean pairing).
double inner(const LatticeState& a, const LatticeState& b);
double norm2(const LatticeState& a);
// a + t*b, shapes must agree.
LatticeState axpy(const LatticeState& a, double t, const LatticeState& b);

// Constant unitary gauge transformation g1 on E1, g2 on E2.
LatticeState gauge_transform(const LatticeState& s, const Mat& g1, const Mat& g2);

// Binary snapshot: "HIGGSLAT" magic, uint32 version, int32 N, r1, r2, double L,
// uint32 field count, then per field a uint32-length-prefixed name, int32 rows,
// int32 cols and the values as (re, im) pairs in row-major site order and
// row-major entry order. Everything little-endian.
void dump_fields(const LatticeState& s, const std::string& path);
LatticeState load_fields(const std::string& path);

}  // namespace higgs::lattice
