#include "rsa/schedule.hpp"

namespace rsa {

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Exponential: return "exponential";
    case ScheduleKind::Logarithmic: return "logarithmic";
    case ScheduleKind::Reciprocal: return "reciprocal";
    case ScheduleKind::Constant: return "constant";
  }
  return "exponential";
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
  if (name == "exponential") return ScheduleKind::Exponential;
  if (name == "logarithmic") return ScheduleKind::Logarithmic;
  if (name == "reciprocal") return ScheduleKind::Reciprocal;
  if (name == "constant") return ScheduleKind::Constant;
  throw std::invalid_argument("unknown schedule kind '" + std::string(name) + "'");
}

}  // namespace rsa
