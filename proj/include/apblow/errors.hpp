#pragma once

#include <stdexcept>
#include <string>

namespace apblow {

enum class Errc {
  precision_exhausted,
  candidate_search_overflow,
  insufficient_balls,
  index_out_of_range,
  calibration_failed,
  domain_error,
  region_empty,
  non_smooth_point,
  empty_scan,
  config_error,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::precision_exhausted: return "PrecisionExhausted";
    case Errc::candidate_search_overflow: return "CandidateSearchOverflow";
    case Errc::insufficient_balls: return "InsufficientBalls";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::calibration_failed: return "CalibrationFailed";
    case Errc::domain_error: return "DomainError";
    case Errc::region_empty: return "RegionEmpty";
    case Errc::non_smooth_point: return "NonSmoothPoint";
    case Errc::empty_scan: return "EmptyScan";
    case Errc::config_error: return "ConfigError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace apblow
