#include "hooklens/glob.h"

namespace hooklens {
namespace {

// Matches a bracket expression starting at pattern[pi] == '['. On success
// sets `next` past the closing ']' and returns whether `c` is in the class.
// Returns false with next == npos when the class is unterminated.
bool match_class(std::string_view pattern, std::size_t pi, char c, std::size_t& next) {
  std::size_t i = pi + 1;
  bool negate = false;
  if (i < pattern.size() && (pattern[i] == '!' || pattern[i] == '^')) {
    negate = true;
    ++i;
  }
  bool matched = false;
  bool first = true;
  while (i < pattern.size() && (pattern[i] != ']' || first)) {
    first = false;
    char lo = pattern[i];
    if (lo == '\\' && i + 1 < pattern.size()) lo = pattern[++i];
    char hi = lo;
    if (i + 2 < pattern.size() && pattern[i + 1] == '-' && pattern[i + 2] != ']') {
      hi = pattern[i + 2];
      i += 2;
    }
    if (lo <= c && c <= hi) matched = true;
    ++i;
  }
  if (i >= pattern.size()) {
    next = std::string_view::npos;
    return false;
  }
  next = i + 1;
  return matched != negate;
}

bool match_from(std::string_view pattern, std::size_t pi, std::string_view path, std::size_t si) {
  while (pi < pattern.size()) {
    char p = pattern[pi];
    if (p == '*') {
      bool globstar = pi + 1 < pattern.size() && pattern[pi + 1] == '*';
      if (globstar) {
        std::size_t rest = pi + 2;
        bool slash_after = rest < pattern.size() && pattern[rest] == '/';
        bool at_segment_start = pi == 0 || pattern[pi - 1] == '/';
        if (slash_after && at_segment_start) {
          // "**/" matches zero or more whole directories.
          for (std::size_t k = si; k <= path.size(); ++k) {
            if ((k == si || path[k - 1] == '/') && match_from(pattern, rest + 1, path, k)) return true;
          }
          return false;
        }
        for (std::size_t k = si; k <= path.size(); ++k) {
          if (match_from(pattern, rest, path, k)) return true;
        }
        return false;
      }
      for (std::size_t k = si; k <= path.size(); ++k) {
        if (match_from(pattern, pi + 1, path, k)) return true;
        if (k < path.size() && path[k] == '/') break;
      }
      return false;
    }
    if (si >= path.size()) return false;
    char c = path[si];
    if (p == '?') {
      if (c == '/') return false;
      ++pi;
      ++si;
      continue;
    }
    if (p == '[') {
      std::size_t next = 0;
      bool in_class = match_class(pattern, pi, c, next);
      if (next == std::string_view::npos) {
        // Unterminated class: treat '[' literally.
        if (c != '[') return false;
        ++pi;
        ++si;
        continue;
      }
      if (!in_class || c == '/') return false;
      pi = next;
      ++si;
      continue;
    }
    if (p == '\\' && pi + 1 < pattern.size()) p = pattern[++pi];
    if (p != c) return false;
    ++pi;
    ++si;
  }
  return si == path.size();
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  if (pattern.starts_with("/")) pattern.remove_prefix(1);
  if (pattern.find('/') == std::string_view::npos) {
    auto slash = path.rfind('/');
    if (slash != std::string_view::npos) path.remove_prefix(slash + 1);
  }
  return match_from(pattern, 0, path, 0);
}

bool glob_covers_directory(std::string_view pattern, std::string_view dir) {
  if (!pattern.ends_with("/**")) return false;
  pattern.remove_suffix(3);
  if (pattern.starts_with("/")) pattern.remove_prefix(1);
  return match_from(pattern, 0, dir, 0);
}

}  // namespace hooklens
