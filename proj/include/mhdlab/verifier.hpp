#pragma once

#include <string>

#include "mhdlab/euler.hpp"
#include "mhdlab/picard.hpp"

namespace mhdlab {

/// Inequality cases checked empirically by ensemble ratio studies.
///   QR1            slice embedding: sup_t ||u(t)||_{H^{a,b}} vs ||u||_{H^{a,b}_theta}
///   dQR_a          sup-norm bound by the H^{s-1,1}_theta norm
///   dQR_b          product estimate in H^{s-1,0}_0
///   LD4_1..LD4_4   coordinate-change bounds under a volume-preserving map
///   CQR_1..CQR_4   windowed propagator bounds (exp / cos / band-limited / sinc)
///   mF             high-modulation inversion bound
///   nE             aggregate linear-theory bound of the three-part solution
///   eQR            null-form bilinear estimate for free waves
///   eQR_control    the same with the non-null product dt(phi) dt(psi)
enum class LemmaId {
  QR1,
  dQR_a,
  dQR_b,
  LD4_1,
  LD4_2,
  LD4_3,
  LD4_4,
  CQR_1,
  CQR_2,
  CQR_3,
  CQR_4,
  mF,
  nE,
  eQR,
  eQR_control,
};

const char* lemma_name(LemmaId id);
LemmaId lemma_from_name(const std::string& name);

struct LemmaCase {
  LemmaId id = LemmaId::QR1;
  int n = 2;
  Real s = 1.6;
  Real theta = 0.75;
  Real eps = 0.25;
  Real a = 0.0;
  Real b = 0.0;
  int members = 50;
  std::uint64_t seed = 1;
  std::vector<int> resolutions = {16, 32, 64};
  Real sigma = 0.0; // data decay; 0 = per-lemma default

  void validate() const;
};

struct RatioRow {
  int resolution = 0;
  Real max = 0.0;
  Real median = 0.0;
  Real p95 = 0.0;
  int skipped = 0; // members with degenerate right-hand side
};

struct RatioReport {
  LemmaId id;
  std::vector<RatioRow> rows;
  Real trend = 0.0; // max consecutive growth of the max ratio per doubling
  bool pass = false;
};

/// Ratio statistics of one lemma at one resolution.
RatioRow verify_inequality(const LemmaCase& c, int resolution);

/// Runs every resolution with matched seeds and assembles the trend verdict
/// (pass = all ratios finite and trend <= 1.5).
RatioReport convergence_sweep(const LemmaCase& c);

std::string ratio_report_csv(const std::vector<RatioReport>& reports);
std::string ratio_report_json(const std::vector<RatioReport>& reports);

} // namespace mhdlab
