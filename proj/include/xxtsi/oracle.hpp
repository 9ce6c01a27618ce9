#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "xxtsi/model.hpp"

namespace xxtsi {

inline constexpr int kOracleMaxSites = 14;

// bit i set = spin up on site i (site 0 is the first site of the ring)
struct SpinBasisSector {
  int n_sites = 0;
  int n_up = 0;
  std::vector<std::uint32_t> states;  // ascending

  static SpinBasisSector make(int n_sites, int n_up);
  long index_of(std::uint32_t s) const;  // -1 if absent
};

struct GroundStateED {
  double energy = 0.0;
  int n_sites = 0;
  int n_up = 0;
  Eigen::VectorXcd amplitudes;  // over the sector basis
  bool degenerate = false;
  double gap = 0.0;  // to the next level across all sectors
  ModelParams params;
};

// Literal operator-product assembly. Throws NumericalFailure if any term
// leaks amplitude out of the sector.
Eigen::MatrixXcd build_hamiltonian(const ModelParams& p, const SpinBasisSector& sector);

// full 2^N dense Hamiltonian, for cross-checking the sector decomposition
Eigen::MatrixXcd build_full_hamiltonian(const ModelParams& p);

GroundStateED ground_state(const ModelParams& p);

struct EdMetrics {
  double energy_per_site = 0, mz = 0;
  double gxx1 = 0, gyy1 = 0, gxy1 = 0, gyx1 = 0, gzz1 = 0;
  double ssp = 0, ee_half = 0, conc_nn = 0, conc_nnn = 0;
  double c_l1_exact = 0;         // (sum |a|)^2 - 1
  double wineland = 0;           // NaN when mz = 0
  std::vector<double> ee_blocks;  // l = 1..N-1 (index l-1)
};

// everything straight from the amplitudes; throws if gs.degenerate
EdMetrics ed_metrics(const GroundStateED& gs);

// expanded state over all 2^N configurations
Eigen::VectorXcd full_state(const GroundStateED& gs);

// helpers usable on any state vector over 2^N configurations
double ed_block_entropy(const Eigen::VectorXcd& psi, int n_sites, int l);
Eigen::Matrix4cd ed_two_site_rdm(const Eigen::VectorXcd& psi, int n_sites, int i, int j);
double wootters_concurrence(const Eigen::Matrix4cd& rho);
// <S^a_i S^b_j> with a, b in {'x','y','z'}
std::complex<double> ed_correlator(const Eigen::VectorXcd& psi, int n_sites, char a, int i, char b, int j);

struct ComparisonRow {
  ModelParams params;
  bool skipped = false;
  std::string note;
  double tolerance = 0;
  bool pass = false;
  std::vector<std::string> names;
  std::vector<double> fermion, ed, delta;
  double max_delta = 0;
};

// oracle tolerance: 1e-10 in PM, 0.6/N in gapless phases, 0.96/N for
// alpha >= 1.5 (0.05 and 0.08 at N = 12)
double oracle_tolerance(const ModelParams& p);

std::vector<ComparisonRow> compare_report(const std::vector<ModelParams>& points);

}  // namespace xxtsi
