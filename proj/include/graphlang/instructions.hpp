#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "graphlang/record.hpp"

namespace graphlang {

/// Per-task instruction templates. Defaults are compiled in from
/// data/instructions/<task>.txt; a directory with the same layout can
/// override any subset of them.
///
/// Templates use `{name}` placeholders, filled from a string map at render
/// time. Braces that do not enclose a bare identifier are left as is.
class InstructionSet {
 public:
  static const InstructionSet& defaults();

  /// Defaults overlaid with every `<task>.txt` found in `dir`.
  static InstructionSet load_overlay(const std::filesystem::path& dir);

  bool contains(std::string_view task) const;
  const std::string& get(std::string_view task) const;
  void set(std::string task, std::string text);

  /// Throws InvalidArgument for an unknown task or a placeholder without a
  /// value.
  std::string render(std::string_view task, const Meta& vars) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

}  // namespace graphlang
