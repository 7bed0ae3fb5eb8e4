#pragma once

// The three graph-family analyses and their aggregation.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reflbound/bounds.hpp"
#include "reflbound/gram.hpp"

namespace reflbound::campaign {

using bounds::CandidateVerdict;
using bounds::CaseKind;
using bounds::CaseParams;

struct FallbackSpec {
  std::vector<std::int64_t> ls;
  CaseParams params;
  /// Replace the enumeration's own verdicts for these l (Case 1 only).
  bool supersede = false;
};

struct CampaignSpec {
  std::string name;
  CaseKind kind = CaseKind::Pair;
  CaseParams params;
  std::int64_t target = 0;
  std::optional<FallbackSpec> fallback;
  /// The bound this family is expected to reproduce; a mismatch is flagged.
  std::int64_t expected = 0;
};

/// gamma64, gamma15 or gamma46.  Throws DomainError for anything else.
CampaignSpec default_spec(std::string_view name);
const std::vector<std::string>& family_names();

struct GramEnvelope {
  std::string system;  // "quad" or "pentagon"
  double min_value = 0;
  double max_value = 0;
  std::vector<double> argmin;
  std::vector<double> argmax;
  double residual_tol = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  /// a1, a2 implied by the envelope, to compare with the campaign parameters.
  double implied_a1 = 0;
  double implied_a2 = 0;
  bool consistent = false;
};

struct FamilyReport {
  CampaignSpec spec;
  bounds::EnumerationResult enumeration;
  std::vector<CandidateVerdict> fallbacks;
  std::vector<CandidateVerdict> superseded;
  std::optional<GramEnvelope> envelope;
  std::optional<std::int64_t> grand_bound;
  std::optional<bounds::FieldIndex> achiever;
  std::vector<std::string> flags;
};

struct CampaignReport {
  std::string campaign;
  std::vector<FamilyReport> families;
  std::optional<std::int64_t> grand_bound;
  std::string achiever_family;
  std::optional<bounds::FieldIndex> achiever;
  std::uint64_t seed = gram::kDefaultSeed;
  int precision_bits = 53;
  std::uint64_t precision_escalations = 0;
  double wall_ms = 0;
};

struct RunOptions {
  int workers = 1;
  NumericPolicy policy{};
  std::uint64_t seed = gram::kDefaultSeed;
  std::optional<std::int64_t> target_override;
  int gram_grid = gram::kDefaultGrid;
  int gram_refine = gram::kDefaultRefine;
};

/// Worker count from REFLBOUND_WORKERS, else the machine's parallelism.
int default_workers();

FamilyReport run_family(const CampaignSpec& spec, const RunOptions& options);

CampaignReport run_gamma64(const RunOptions& options = {});
CampaignReport run_gamma15(const RunOptions& options = {});
CampaignReport run_gamma46(const RunOptions& options = {});
CampaignReport run_all(const RunOptions& options = {});
/// Dispatch by name: gamma64, gamma15, gamma46 or all.
CampaignReport run(std::string_view name, const RunOptions& options = {});

}  // namespace reflbound::campaign
