#pragma once

// Internal helpers shared by the JSON readers/writers. Values are exact:
// integers may appear as JSON numbers, everything else must be a "num/den"
// string; floating-point literals are rejected outright.

#include <string>

#include <json.hpp>

#include "triside/errors.hpp"
#include "triside/rational.hpp"

namespace triside::jsonio {

inline nlohmann::json rat_to_json(const Rat& value) {
  if (value.get_den() == 1 && value.get_num().fits_slong_p())
    return value.get_num().get_si();
  return rat_to_string(value);
}

// All quantities in our file formats are nonnegative, so that is enforced
// here; `path` names the offending field in error messages.
inline Rat rat_from_json(const nlohmann::json& value, const std::string& path) {
  Rat result;
  if (value.is_number_unsigned()) {
    result = Rat(static_cast<unsigned long>(value.get<std::uint64_t>()));
  } else if (value.is_number_integer()) {
    result = Rat(static_cast<long>(value.get<std::int64_t>()));
  } else if (value.is_string()) {
    auto parsed = rat_from_string(value.get<std::string>());
    if (!parsed) throw InputError(path + ": malformed rational string");
    result = *parsed;
  } else if (value.is_number()) {
    throw InputError(path + ": floating-point numbers are not accepted; " +
                     "write an integer or a \"num/den\" string");
  } else {
    throw InputError(path + ": expected an integer or a \"num/den\" string");
  }
  if (result < 0) throw InputError(path + ": negative value");
  return result;
}

inline nlohmann::json parse_document(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw InputError(std::string(what) + " is not valid JSON: " + error.what());
  }
}

inline std::vector<std::string> string_list(const nlohmann::json& value,
                                            const std::string& path) {
  if (!value.is_array()) throw InputError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& entry : value) {
    if (!entry.is_string()) throw InputError(path + ": expected an array of strings");
    out.push_back(entry.get<std::string>());
  }
  return out;
}

}  // namespace triside::jsonio
