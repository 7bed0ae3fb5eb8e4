#pragma once

// JSON and plain-text renderings of campaign reports.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "reflbound/campaign.hpp"

namespace reflbound::report {

using Json = nlohmann::ordered_json;

Json to_json(const bounds::CandidateVerdict& v);
Json to_json(const campaign::FamilyReport& f);
/// The full report; `with_timing` adds wall_ms, the only nondeterministic field.
Json to_json(const campaign::CampaignReport& r, bool with_timing = true);

/// Serialized report without timing; identical across runs and worker counts.
std::string body(const campaign::CampaignReport& r);
/// 64-bit FNV-1a of body(r).
std::uint64_t body_hash(const campaign::CampaignReport& r);

/// Writes via a temporary file and rename, so a failed run leaves nothing behind.
void write_atomically(const std::filesystem::path& path, const std::string& text);

/// Human-readable summary table.
std::string summary_table(const campaign::CampaignReport& r);

}  // namespace reflbound::report
