#ifndef TOPOSVAL_REPORT_HPP
#define TOPOSVAL_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

namespace toposval {

/// One violated condition instance. `where` names the offending
/// objects/morphisms/elements; `expected`/`actual` are rendered values.
struct Violation {
  std::string condition;
  std::string where;
  std::string expected;
  std::string actual;
};

/// Result of a structural check. Violations are data, not exceptions:
/// an empty report means the checked laws hold.
struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes; // non-fatal remarks (e.g. skipped pairs)

  bool ok() const { return violations.empty(); }

  void add(std::string condition, std::string where, std::string expected,
           std::string actual) {
    violations.push_back({std::move(condition), std::move(where),
                          std::move(expected), std::move(actual)});
  }

  void note(std::string text) { notes.push_back(std::move(text)); }

  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
};

} // namespace toposval

#endif
