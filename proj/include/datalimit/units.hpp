#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "datalimit/errors.hpp"

namespace datalimit {

enum class InfoUnit { Nats, Bits, Bytes, Megabytes };

inline constexpr std::string_view unit_name(InfoUnit u) {
  switch (u) {
    case InfoUnit::Nats: return "nats";
    case InfoUnit::Bits: return "bits";
    case InfoUnit::Bytes: return "bytes";
    case InfoUnit::Megabytes: return "MB";
  }
  return "nats";
}

inline std::optional<InfoUnit> parse_unit(std::string_view s) {
  if (s == "nats" || s == "nat") return InfoUnit::Nats;
  if (s == "bits" || s == "bit") return InfoUnit::Bits;
  if (s == "bytes" || s == "byte" || s == "B") return InfoUnit::Bytes;
  if (s == "MB") return InfoUnit::Megabytes;
  return std::nullopt;
}

/// Nats per one unit of `u`. MB is decimal (10^6 bytes).
inline constexpr double nats_per(InfoUnit u) {
  switch (u) {
    case InfoUnit::Nats: return 1.0;
    case InfoUnit::Bits: return std::numbers::ln2;
    case InfoUnit::Bytes: return 8.0 * std::numbers::ln2;
    case InfoUnit::Megabytes: return 8.0e6 * std::numbers::ln2;
  }
  return 1.0;
}

/// An amount of information, stored in nats.
class InfoQuantity {
 public:
  constexpr InfoQuantity() = default;

  static InfoQuantity nats(double value) { return InfoQuantity(value); }

  static InfoQuantity from(double value, InfoUnit u) {
    return InfoQuantity(value * nats_per(u));
  }

  constexpr double value_nats() const { return nats_; }

  double in(InfoUnit u) const {
    return u == InfoUnit::Nats ? nats_ : nats_ / nats_per(u);
  }

  friend constexpr bool operator==(InfoQuantity, InfoQuantity) = default;
  friend constexpr auto operator<=>(InfoQuantity, InfoQuantity) = default;

 private:
  explicit InfoQuantity(double nats) : nats_(nats) {
    detail::require(std::isfinite(nats) && nats >= 0.0,
                    "information quantity must be finite and non-negative");
  }

  double nats_ = 0.0;
};

inline double convert(InfoQuantity q, InfoUnit u) { return q.in(u); }

/// Parses "<number><unit>", e.g. "3.5MB", "1e7nats", "1e7" (nats).
inline InfoQuantity parse_quantity(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse information quantity '" + s + "'");
  }
  std::string_view suffix = std::string_view(s).substr(used);
  while (!suffix.empty() && suffix.front() == ' ') suffix.remove_prefix(1);
  InfoUnit unit = InfoUnit::Nats;
  if (!suffix.empty()) {
    auto u = parse_unit(suffix);
    if (!u) throw DomainError("unknown information unit '" + std::string(suffix) + "'");
    unit = *u;
  }
  if (!std::isfinite(value) || value < 0.0)
    throw DomainError("information quantity must be finite and non-negative");
  return InfoQuantity::from(value, unit);
}

}  // namespace datalimit
