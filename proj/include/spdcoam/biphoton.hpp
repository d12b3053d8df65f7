#pragma once

#include <map>
#include <string>
#include <vector>

#include "spdcoam/azimuthal.hpp"
#include "spdcoam/field.hpp"
#include "spdcoam/grid.hpp"
#include "spdcoam/kernel.hpp"
#include "spdcoam/lg_mode.hpp"

namespace spdcoam {

int total_pair_oam(int l, int m_s, int m_i);

struct BiphotonSettings {
  int radial_nodes = 96;
  int kernel_n_phi = 64;
  int max_m = 16;  // truncation cap
  double captured_target = 1.0 - 1e-6;
};

enum class PairingMode {
  IdlerPoint,  // idler detector fixed at its beam center, amplitude integrated over the idler ring
  Antipodal,   // literal k_i = -k_s pairing with the per-term (-1)^{l-n+m_i} factor
};

struct ProfileOptions {
  PairingMode pairing = PairingMode::IdlerPoint;
  int analysis_max_m = 16;
  int analysis_n_phi = kDefaultAngularSamples;
  std::string config_digest;
};

struct BiphotonProfile {
  ComplexGrid signal_grid;
  Point2 idler_point;
  AzimuthalSpectrum m_channels;
  std::string config_digest;
  int truncation_m = 0;
  double captured_power = 1.0;
  double ring_mismatch = 0.0;
  std::map<int, double> channel_power;  // normalized power of each assembled channel
  std::vector<std::string> warnings;
};

struct PointPair {
  Point2 signal;  // offset from rho_0,s
  Point2 idler;   // offset from rho_0,i
};

class BiphotonKernel {
 public:
  BiphotonKernel(const PumpBeam& pump, const CrystalModel& crystal, const BiphotonSettings& settings = {});

  const PumpBeam& pump() const { return pump_; }
  const CrystalModel& crystal() const { return crystal_; }
  const BiphotonSettings& settings() const { return settings_; }
  // Base-ring tensor, truncated adaptively.
  const GTensor& gtensor() const { return gtensor_; }

  // Radial quadrature nodes kappa_j = j dk on [0, kappa_max].
  double kappa_max() const { return kappa_max_; }
  double dk() const { return dk_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  // coupling-free radial weight W(dkz(kappa_s, kappa_i))
  cplx radial_weight(double kappa_s, double kappa_i) const;

  // Tensor at one radial node pair.
  GTensor g_at(double kappa_s, double kappa_i, int max_m) const;

  // Channel spectra A_m(kappa) for every m the kernel lattice resolves, keyed by m.
  std::map<int, RadialSpectrum> channel_spectra(PairingMode pairing) const;
  std::map<int, RadialSpectrum> channel_spectra(PairingMode pairing, bool with_coupling) const;

  cplx two_photon_amplitude_point(const PointPair& pair) const;
  std::vector<cplx> two_photon_amplitude_points(const std::vector<PointPair>& pairs) const;

 private:
  PumpBeam pump_;
  CrystalModel crystal_;
  BiphotonSettings settings_;
  GTensor gtensor_;
  double kappa_max_ = 0.0;
  double dk_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

double ring_mismatch(const CrystalModel& crystal, int samples = 1024);

BiphotonProfile degenerate_profile(const BiphotonKernel& kernel, const Point2& idler_point, const GridSpec& grid,
                                   const ProfileOptions& options = {});

AzimuthalSpectrum channel_decomposition(const BiphotonProfile& profile);

}  // namespace spdcoam
