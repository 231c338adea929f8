#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace kqt {

// Bad arguments, malformed preconditions, out-of-range vertices. Maps to CLI exit 2.
class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// Edge-list text that cannot be parsed. Messages name the offending line. CLI exit 2.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A construction relied on an arc the theory forces but the input lacks.
// Signals that the input is not a legal instance; never repaired. CLI exit 1.
class structural_violation : public std::runtime_error {
public:
    structural_violation(const std::string& rule, int from, int to)
        : std::runtime_error(rule + ": missing arc " + std::to_string(from) + "->" +
                             std::to_string(to)),
          rule_(rule), arc_(std::make_pair(from, to)) {}

    explicit structural_violation(const std::string& rule)
        : std::runtime_error(rule), rule_(rule) {}

    const std::string& rule() const { return rule_; }
    const std::optional<std::pair<int, int>>& missing_arc() const { return arc_; }

private:
    std::string rule_;
    std::optional<std::pair<int, int>> arc_;
};

}  // namespace kqt
