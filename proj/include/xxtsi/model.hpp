#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xxtsi {

// How the Jordan-Wigner boundary bond is treated on the periodic chain.
//  parity_exact: fermions see periodic momenta for odd N_f and antiperiodic
//                ones for even N_f; both sectors are filled and the lower
//                energy wins. Reproduces spin ED exactly.
//  paper_grid:   the single grid k = 2 pi m / N regardless of parity.
enum class Boundary { parity_exact, paper_grid };

const char* to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct ModelParams {
  double j = 1.0;
  double alpha = 0.0;
  double h = 0.0;
  int n_sites = 100;
  Boundary boundary = Boundary::parity_exact;

  // throws InvalidArgument
  void validate() const;
};

enum class Twist { periodic, antiperiodic };

// k_m = 2 pi q_m / denom, with denom = N (periodic) or 2N (antiperiodic,
// q odd). Integer numerators let the correlators use exact phase tables.
struct MomentumGrid {
  int n_sites = 0;
  Twist twist = Twist::periodic;
  int denom = 0;
  std::vector<int> q;          // ascending
  std::vector<double> k_values;  // ascending, in (-pi, pi]
};

struct FermiSea {
  MomentumGrid grid;
  std::vector<std::uint8_t> occupied_mask;  // parallel to grid.k_values
  std::vector<double> occupied;             // occupied momenta, ascending
  double filling = 0.0;
  // Ground state not unique: a zero mode could be toggled at no cost, or
  // both boundary sectors tie.
  bool degenerate = false;

  int count() const { return static_cast<int>(occupied.size()); }
};

enum class Phase { PM, SL_I, SL_II };

struct PhaseLabel {
  Phase phase = Phase::PM;
  int fermi_point_count = 0;
};

const char* to_string(Phase p);

// energies below this (scaled by j(1+|h|+|alpha|)) count as zero modes
inline constexpr double kTieTolerance = 1e-12;

double dispersion(const ModelParams& p, double k);

// g(k) = -cos k + (alpha/2) sin 2k; a mode is filled iff h > g(k)
double band_function(double alpha, double k);

MomentumGrid build_grid(int n_sites, Twist twist = Twist::periodic);

FermiSea fermi_sea(const ModelParams& p);

double ground_energy_per_site(const ModelParams& p);
double ground_energy_per_site(const ModelParams& p, const FermiSea& sea);

double magnetization_z(const ModelParams& p);

// throws DegenerateClassification on a critical line
PhaseLabel classify_phase(const ModelParams& p);

std::vector<double> critical_fields(double alpha);

}  // namespace xxtsi
