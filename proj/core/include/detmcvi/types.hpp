#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace detmcvi {

/// Opaque handle for a domain state. Domains encode structured states into
/// the 64-bit id; two refs are equal iff they denote the same state.
struct StateRef {
  std::uint64_t id = 0;
  friend constexpr auto operator<=>(StateRef, StateRef) = default;
};

/// Canonical observation token. Domains encode observations so that equality
/// of tokens is exact equality of observations.
struct ObservationId {
  std::uint64_t token = 0;
  friend constexpr auto operator<=>(ObservationId, ObservationId) = default;
};

/// Dense action index in [0, NumActions()).
using ActionId = std::int32_t;

/// Index of a node inside an Fsc.
using NodeIndex = std::int32_t;
inline constexpr NodeIndex kNoNode = -1;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Tolerance for probability normalization.
inline constexpr double kProbabilityTolerance = 1e-9;

}  // namespace detmcvi

template <>
struct std::hash<detmcvi::StateRef> {
  std::size_t operator()(detmcvi::StateRef s) const noexcept {
    return std::hash<std::uint64_t>{}(s.id);
  }
};

template <>
struct std::hash<detmcvi::ObservationId> {
  std::size_t operator()(detmcvi::ObservationId o) const noexcept {
    return std::hash<std::uint64_t>{}(o.token);
  }
};
