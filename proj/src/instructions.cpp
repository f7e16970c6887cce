#include "graphlang/instructions.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "graphlang/error.hpp"

namespace graphlang {
namespace detail {
extern const std::pair<std::string_view, std::string_view> kDefaultInstructions[];
extern const std::size_t kDefaultInstructionCount;
}  // namespace detail

namespace {

bool is_placeholder_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

const InstructionSet& InstructionSet::defaults() {
  static const InstructionSet set = [] {
    InstructionSet s;
    for (std::size_t i = 0; i < detail::kDefaultInstructionCount; ++i) {
      const auto& [task, text] = detail::kDefaultInstructions[i];
      s.templates_.emplace(std::string(task), strip_trailing_newlines(std::string(text)));
    }
    return s;
  }();
  return set;
}

InstructionSet InstructionSet::load_overlay(const std::filesystem::path& dir) {
  InstructionSet s = defaults();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("instruction directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) throw IoError("cannot read " + entry.path().string());
    std::ostringstream buf;
    buf << in.rdbuf();
    s.set(entry.path().stem().string(), strip_trailing_newlines(buf.str()));
  }
  return s;
}

bool InstructionSet::contains(std::string_view task) const { return templates_.find(task) != templates_.end(); }

const std::string& InstructionSet::get(std::string_view task) const {
  auto it = templates_.find(task);
  if (it == templates_.end()) throw InvalidArgument("no instruction template for task '" + std::string(task) + "'");
  return it->second;
}

void InstructionSet::set(std::string task, std::string text) { templates_[std::move(task)] = std::move(text); }

std::string InstructionSet::render(std::string_view task, const Meta& vars) const {
  const std::string& tmpl = get(task);
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{') {
      std::size_t j = i + 1;
      while (j < tmpl.size() && is_placeholder_char(tmpl[j])) ++j;
      if (j < tmpl.size() && tmpl[j] == '}' && j > i + 1) {
        std::string key = tmpl.substr(i + 1, j - i - 1);
        auto it = vars.find(key);
        if (it == vars.end()) {
          throw InvalidArgument("instruction template '" + std::string(task) + "' needs a value for {" + key + "}");
        }
        out += it->second;
        i = j;
        continue;
      }
    }
    out += tmpl[i];
  }
  return out;
}

}  // namespace graphlang
