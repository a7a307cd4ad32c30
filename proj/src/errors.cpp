#include "nbody/errors.hpp"

#include <sstream>

namespace nbody {

namespace {

std::string collision_message(std::size_t a, std::size_t b, double t, double d)
{
    std::ostringstream os;
    os << "collision between bodies " << a << " and " << b << " at t = " << t
       << " (distance " << d << ")";
    return os.str();
}

} // namespace

CollisionError::CollisionError(std::size_t body_a, std::size_t body_b, double time, double distance)
    : Error(collision_message(body_a, body_b, time, distance)),
      body_a_(body_a), body_b_(body_b), time_(time), distance_(distance)
{
}

CollisionParityError::CollisionParityError(int m)
    : Error("cubic family needs an odd number of masses per loop (m = " + std::to_string(m) +
            "): with even m, partners on opposite sides of a loop meet the next loop's masses "
            "at both intersections simultaneously"),
      m_(m)
{
}

RecordError::RecordError(const std::string& what, std::size_t byte_offset)
    : Error(byte_offset == npos ? what : what + " (at byte " + std::to_string(byte_offset) + ")"),
      byte_offset_(byte_offset)
{
}

} // namespace nbody
