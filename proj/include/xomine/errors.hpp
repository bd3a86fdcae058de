#pragma once

#include <stdexcept>
#include <string>

namespace xomine {

// Error taxonomy mirrored onto CLI exit codes (see cli.cpp):
//   UsageError -> 1, IoError -> 2, DataError -> 3, anything else -> 4.

// Bad flags or flag combinations.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (parse errors, unknown terms,
// cyclic ontologies, empty co-category sets, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace xomine
