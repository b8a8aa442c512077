#include "triside/rational.hpp"

#include <cctype>

namespace triside {

std::optional<Rat> rat_from_string(const std::string& text) {
  if (text.empty()) return std::nullopt;
  // mpq_set_str is lenient about whitespace and bases; insist on a strict
  // integer or integer/integer shape before handing over.
  size_t slash = std::string::npos;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/') {
      if (slash != std::string::npos) return std::nullopt;  // second slash
      slash = i;
      continue;
    }
    bool sign_ok = (c == '-' || c == '+') && i == 0;
    if (!sign_ok && !std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
  }
  auto digits_in = [&](size_t from, size_t to) {
    for (size_t i = from; i < to; ++i)
      if (std::isdigit(static_cast<unsigned char>(text[i]))) return true;
    return false;
  };
  if (!digits_in(0, slash == std::string::npos ? text.size() : slash))
    return std::nullopt;
  if (slash != std::string::npos && !digits_in(slash + 1, text.size()))
    return std::nullopt;

  Rat value;
  try {
    value = Rat(text, 10);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  if (value.get_den() == 0) return std::nullopt;
  value.canonicalize();
  return value;
}

std::string rat_to_string(const Rat& value) {
  return value.get_str();
}

double rat_to_double(const Rat& value) {
  return value.get_d();
}

}  // namespace triside
