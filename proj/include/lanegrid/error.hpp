#pragma once

#include <stdexcept>
#include <string>

namespace lanegrid {

/// Base class for all lanegrid errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (CLI flags, scenario parameters, pool sizes).
/// Maps to process exit code 1.
class config_error : public error {
 public:
  using error::error;
};

/// Invalid runtime state: non-physical cell states, structural tree
/// violations, bad checkpoints. Maps to process exit code 2.
class state_error : public error {
 public:
  using error::error;
};

/// Communication failures in distributed mode: timeouts, connection loss.
/// Maps to process exit code 3.
class comm_error : public error {
 public:
  using error::error;
};

/// Wire protocol violations: bad framing, unexpected message for the
/// current phase. A subtype of comm_error (same exit code).
class protocol_error : public comm_error {
 public:
  using comm_error::comm_error;
};

}  // namespace lanegrid
