#pragma once

#include <string_view>
#include <vector>

#include "cdp/cd.hpp"
#include "cdp/region.hpp"

namespace cdp {

/// Mass the CD assigns to the region: sum over pieces of H(hi) - H(lo).
double direct_support(const ConfidenceDistribution& cd, const GeneralizedInterval& piece);
double direct_support(const ConfidenceDistribution& cd, const NullRegion& region);

/// inf over the region of 2 min{H(t), 1 - H(t)}. Since H is monotone the
/// infimum over a piece sits at one of its endpoints; a piece with an infinite
/// endpoint gives 0.
double indirect_support(const ConfidenceDistribution& cd, const GeneralizedInterval& piece);
double indirect_support(const ConfidenceDistribution& cd, const NullRegion& region);

/// min{H(t0)/gamma, (1 - H(t0))/(1 - gamma)}, clamped to [0,1].
/// gamma = 0.5 reproduces indirect_support on {t0}.
double weighted_indirect(const ConfidenceDistribution& cd, double theta0, double gamma);

/// CD mass of the density level set {t : h(t) <= inf over the region of h},
/// where h is the CD density. Requires a CD with a density (exact kinds,
/// which are unimodal about their center).
double extended_indirect_support(const ConfidenceDistribution& cd, const NullRegion& region);

/// direct + indirect on one piece, clamped to [0,1].
double full_support(const ConfidenceDistribution& cd, const GeneralizedInterval& piece);

enum class CombineRule {
  max_full,    // max over pieces of full support
  max_direct,  // max over pieces of direct support
  p_star,      // largest minus second-largest full support
  p_max,       // max{direct(region), max over boundary v of indirect({v})}
};

std::string_view to_string(CombineRule rule);

struct PieceSupport {
  GeneralizedInterval piece;
  double direct;
  double indirect;
  double full;
};

struct SupportReport {
  std::vector<PieceSupport> pieces;
  double p;
  CombineRule rule;
};

/// Per-piece supports and the combined value under `rule`.
SupportReport evaluate(const ConfidenceDistribution& cd, const NullRegion& region,
                       CombineRule rule);

/// max over pieces of full support.
SupportReport p_value(const ConfidenceDistribution& cd, const NullRegion& region);

/// p(1) - p(2) of the ordered per-piece full supports; a single piece
/// returns its full support.
double p_star(const ConfidenceDistribution& cd, const NullRegion& region);

/// max{direct(region), max over finite boundary points v of indirect({v})}.
/// A region without finite endpoints falls back to direct support.
double p_max_uni(const ConfidenceDistribution& cd, const NullRegion& region);

/// Summary statistics of a two-formulation equivalence study.
struct EquivalenceSummary {
  int n1 = 0;
  int n2 = 0;
  double mean_test = 0.0;
  double mean_reference = 0.0;
  double var_d = 0.0;  // pooled variance of the paired differences
  double lower = 0.0;  // theta_l
  double upper = 0.0;  // theta_u
};

struct EquivalenceResult {
  double lower_tail;  // H(theta_l)
  double upper_tail;  // 1 - H(theta_u)
  double p;           // max of the two
  int df;
};

/// p-value for H0: theta <= theta_l or theta >= theta_u with
/// theta = mu_T - mu_R, under the Student-t CD on n1 + n2 - 2 degrees of
/// freedom with scale sd_d sqrt(1/n1 + 1/n2).
EquivalenceResult bioeq_p(const EquivalenceSummary& summary);

}  // namespace cdp
