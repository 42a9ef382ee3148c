// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adsst/adaptive_stft.hpp"

namespace adsst {

// A component pair violates the class or feasibility assumptions at time t.
class SeparationError : public InvalidArgument {
 public:
  SeparationError(double t, std::size_t k, const std::string& what)
      : InvalidArgument(what), t_(t), k_(k) {}
  double t() const { return t_; }
  // 1-based index of the upper component of the violating pair (k-1, k).
  std::size_t k() const { return k_; }

 private:
  double t_;
  std::size_t k_;
};

// sigma_1(t) = max_k 2 alpha / (phi'_k - phi'_{k-1}). K = 1 returns the
// constant default. The evaluators throw SeparationError on a nonpositive gap.
SigmaProfile sigma1(const MulticomponentModel& m, double alpha, double default_sigma = 0.05);

// sigma_2(t) = max_k 4 alpha / (b_k + sqrt(b_k^2 - 8 alpha a_k)) with
// a_k = 2 pi alpha (|phi''_{k-1}| + |phi''_k|) and b_k = phi'_k - phi'_{k-1}.
// Every time in `check_times` is tested for feasibility (b^2 >= 8 alpha a) up
// front; the first violation throws and no profile is returned.
SigmaProfile sigma2(const MulticomponentModel& m, double alpha,
                    const std::vector<double>& check_times = {}, double default_sigma = 0.05);

enum class SelectionRule { sigma1, sigma2 };
// Times in `times` where the maximizing pair changes (the later sample of each switch).
struct BranchSwitch {
  double t;
  std::size_t from_k, to_k;  // 1-based upper index of the active pair
};
std::vector<BranchSwitch> branch_switches(const MulticomponentModel& m, double alpha,
                                          SelectionRule rule, const std::vector<double>& times);

// Lower and upper ends of the admissible sigma bracket at t: any sigma in
// [lower, upper] gives disjoint O' zones. upper is +inf when every a_k = 0.
struct SigmaBracket {
  double lower = 0.0, upper = 0.0;
  bool feasible() const { return lower <= upper; }
};
SigmaBracket sigma2_bracket(const MulticomponentModel& m, double alpha, double t);

enum class ZoneKind { Z, O, O_prime };
const char* zone_kind_name(ZoneKind k);

// Rows are components, columns are times.
struct ZoneSet {
  ZoneKind kind = ZoneKind::Z;
  std::vector<double> times;
  RMatrix center, halfwidth;
  RMatrix alpha_k;         // alpha for Z and O', alpha_k for O
  std::vector<double> sigma;
  double alpha = 0.0;

  std::size_t K() const { return center.rows(); }
};

// Z: alpha/sigma; O: alpha_k/sigma from the chirped window transform;
// O': (alpha/sigma)(1 + 2 pi |phi''| sigma^2).
ZoneSet zones(const MulticomponentModel& m, const SigmaProfile& sigma, const WindowFamily& w,
              double tau0, ZoneKind kind, const std::vector<double>& times);

struct SeparationReport {
  std::vector<double> min_gap;  // per time; +inf for K < 2
  double worst_gap = 0.0;
  double worst_time = 0.0;
  bool pass = true;
  // Filled when a sigma_2 bracket check was requested.
  bool bracket_checked = false;
  bool bracket_pass = true;
  std::vector<double> bracket_fail_times;
  std::string summary() const;
};

// Adjacent zones are open intervals, so touching zones (gap 0) are disjoint.
// Gaps above -1e-12 (|c_k| + |c_{k-1}|) count as touching to absorb rounding.
SeparationReport check_separation(const ZoneSet& z);
// Also verifies sigma(t) <= min_k 4 alpha / (b_k - sqrt(b_k^2 - 8 alpha a_k)).
SeparationReport check_separation(const ZoneSet& z, const MulticomponentModel& m);

struct LkResult {
  RMatrix L;  // K x T
  bool single_zone = false;  // K = 1 convention L_1 = 2 alpha_1 / sigma
};
// L_k = (1/sigma) min(alpha_k + alpha_{k-1}, alpha_k + alpha_{k+1}); boundary
// components use their single neighbor.
LkResult l_k(const ZoneSet& zones_O);

void write_zone_csv(std::ostream& out, const ZoneSet& z);

}  // namespace adsst
