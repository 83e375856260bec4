#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace vanet {

/// Simulation time in seconds.
using SimTime = double;

enum class EntityId : std::uint32_t {};
enum class DriverId : std::uint32_t {};
enum class EventId : std::uint32_t {};
enum class MessageId : std::uint64_t {};

inline constexpr EntityId kKernelEntity{std::numeric_limits<std::uint32_t>::max()};
inline constexpr EntityId kNoEntity{std::numeric_limits<std::uint32_t>::max() - 1};

template <class E>
constexpr auto raw(E e) noexcept
{
  return static_cast<std::underlying_type_t<E>>(e);
}

/// Message ids are unique per origin: the high word carries the origin entity.
constexpr MessageId make_message_id(EntityId origin, std::uint32_t sequence) noexcept
{
  return MessageId{(static_cast<std::uint64_t>(raw(origin)) << 32) | sequence};
}

constexpr EntityId message_origin(MessageId id) noexcept
{
  return EntityId{static_cast<std::uint32_t>(raw(id) >> 32)};
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// A violated protocol precondition (duplicate ids, malformed requests).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scheduler bug: an event dated before the current clock.
class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vanet
