#pragma once

#include <string>

namespace isoflow {

enum class FamilyTag {
  Krawtchouk,
  Meixner,
  Laguerre,
  MeixnerPollaczek,
  Charlier,
  Hermite,
  BesselE2,
  MeixnerFunction,
};

std::string family_name(FamilyTag tag);
// Accepts the names produced by family_name (case-sensitive).
FamilyTag parse_family(const std::string& name);

}  // namespace isoflow
