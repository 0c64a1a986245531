#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kwsql {

/// Kinds of problems found while ingesting datasets, taxonomies and query sets.
enum class DataErrorKind {
  kMalformed,
  kDanglingForeignKey,
  kDuplicateTupleId,
  kSelfReferencingKey,
  kMissingData,
  kTaxonomyCycle,
  kTaxonomyOrphan,
  kTaxonomyRoot,
};

std::string_view to_string(DataErrorKind kind);

/// Raised for bad input files. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  DataError(DataErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  DataErrorKind kind() const noexcept { return kind_; }

 private:
  DataErrorKind kind_;
};

/// Raised for bad user input (empty query, unknown dataset, inconsistent setup).
/// The CLI maps it to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kwsql
