#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hooklens {

using FileId = std::int32_t;

// Byte range inside one file plus its 1-based line/column projection.
// Columns count bytes; the end position is exclusive.
struct Span {
  FileId file_id = -1;
  std::uint32_t start_byte = 0;
  std::uint32_t end_byte = 0;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  bool contains(const Span& other) const {
    return file_id == other.file_id && start_byte <= other.start_byte &&
           other.end_byte <= end_byte;
  }
  bool valid() const { return file_id >= 0 && start_byte <= end_byte; }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span& a, const Span& b) {
    if (auto c = a.file_id <=> b.file_id; c != 0) return c;
    if (auto c = a.start_byte <=> b.start_byte; c != 0) return c;
    return a.end_byte <=> b.end_byte;
  }
};

struct SourceFile {
  FileId file_id = -1;
  std::string relative_path;  // always '/'-separated
  std::string content;
  std::vector<std::uint32_t> line_offsets;

  SourceFile() = default;
  SourceFile(FileId id, std::string path, std::string text);

  // Builds a span from a byte range, clamped to the file.
  Span span(std::uint32_t start, std::uint32_t end) const;
  std::string_view slice(const Span& s) const;
  std::uint32_t line_count() const;

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

std::vector<std::uint32_t> compute_line_offsets(std::string_view text);

// Returns true when `text` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view text);

}  // namespace hooklens
