#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbert/kernels.hpp"

namespace hilbert {

enum class Profile { Quick, Full };

Profile parse_profile(const std::string& name);
const char* profile_name(Profile p);

struct CriterionInfo {
  int id;
  const char* name;
};

/// The ten acceptance criteria in order.
const std::vector<CriterionInfo>& criteria();

/// Runs one criterion; the full profile uses the acceptance truncations.
KernelReport run_criterion(int id, Profile profile, std::uint64_t seed);

/// Every criterion, with per-criterion wall time when timings is set.
nlohmann::json run_verify_all(Profile profile, std::uint64_t seed, bool timings);

}  // namespace hilbert
