#include "isoflow/family_tag.hpp"

#include <array>
#include <utility>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {
constexpr std::array<std::pair<FamilyTag, const char*>, 8> kNames{{
    {FamilyTag::Krawtchouk, "krawtchouk"},
    {FamilyTag::Meixner, "meixner"},
    {FamilyTag::Laguerre, "laguerre"},
    {FamilyTag::MeixnerPollaczek, "meixner_pollaczek"},
    {FamilyTag::Charlier, "charlier"},
    {FamilyTag::Hermite, "hermite"},
    {FamilyTag::BesselE2, "bessel"},
    {FamilyTag::MeixnerFunction, "meixner_function"},
}};
}  // namespace

std::string family_name(FamilyTag tag) {
  for (const auto& [t, name] : kNames)
    if (t == tag) return name;
  return "unknown";
}

FamilyTag parse_family(const std::string& name) {
  for (const auto& [t, n] : kNames)
    if (name == n) return t;
  throw ConfigurationError("unknown family '" + name + "'");
}

}  // namespace isoflow
