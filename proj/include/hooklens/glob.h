#pragma once

#include <string_view>

namespace hooklens {

// gitignore-style glob match against a '/'-separated relative path.
//   *      any run of characters except '/'
//   **     any run of characters including '/'; "**/" also matches nothing
//   ?      one character except '/'
//   [a-z]  character class, "[!..]" or "[^..]" negates
// A pattern without '/' is matched against the final path component only.
bool glob_match(std::string_view pattern, std::string_view path);

// True when every path below `dir` is matched by `pattern`, which lets the
// scanner skip the whole directory. Only patterns ending in "/**" qualify.
bool glob_covers_directory(std::string_view pattern, std::string_view dir);

}  // namespace hooklens
