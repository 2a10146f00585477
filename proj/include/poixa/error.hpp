#pragma once

#include <stdexcept>
#include <string>

namespace poixa {

enum class errc {
  empty_dataset,
  corrupt_dataset,
  trajectory_too_short,
  unknown_poi,
  no_candidate,
  unknown_id,
  shape_error,
  numeric_error,
  bad_k,
  bad_index,
  domain_error,
  empty_set,
  not_enough_users,
  missing_checkpoint,
  missing_dataset,
  config_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_dataset: return "EmptyDataset";
    case errc::corrupt_dataset: return "CorruptDataset";
    case errc::trajectory_too_short: return "TrajectoryTooShort";
    case errc::unknown_poi: return "UnknownPoi";
    case errc::no_candidate: return "NoCandidate";
    case errc::unknown_id: return "UnknownId";
    case errc::shape_error: return "ShapeError";
    case errc::numeric_error: return "NumericError";
    case errc::bad_k: return "BadK";
    case errc::bad_index: return "BadIndex";
    case errc::domain_error: return "DomainError";
    case errc::empty_set: return "EmptySet";
    case errc::not_enough_users: return "NotEnoughUsers";
    case errc::missing_checkpoint: return "MissingCheckpoint";
    case errc::missing_dataset: return "MissingDataset";
    case errc::config_error: return "ConfigError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

  // Process exit code for the CLI: 2 config, 3 missing artifact, 4 data, 5 numeric.
  int exit_code() const noexcept {
    switch (code_) {
      case errc::config_error: return 2;
      case errc::missing_checkpoint:
      case errc::missing_dataset: return 3;
      case errc::shape_error:
      case errc::numeric_error: return 5;
      default: return 4;
    }
  }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

}  // namespace poixa
