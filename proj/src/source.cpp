#include "hooklens/source.h"

#include <algorithm>

namespace hooklens {

std::vector<std::uint32_t> compute_line_offsets(std::string_view text) {
  std::vector<std::uint32_t> offsets{0};
  for (std::uint32_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') offsets.push_back(i + 1);
  }
  return offsets;
}

SourceFile::SourceFile(FileId id, std::string path, std::string text)
    : file_id(id),
      relative_path(std::move(path)),
      content(std::move(text)),
      line_offsets(compute_line_offsets(content)) {}

Span SourceFile::span(std::uint32_t start, std::uint32_t end) const {
  const auto size = static_cast<std::uint32_t>(content.size());
  start = std::min(start, size);
  end = std::clamp(end, start, size);

  auto locate = [&](std::uint32_t byte, std::uint32_t& line, std::uint32_t& col) {
    auto it = std::upper_bound(line_offsets.begin(), line_offsets.end(), byte);
    auto idx = static_cast<std::uint32_t>(std::distance(line_offsets.begin(), it)) - 1;
    line = idx + 1;
    col = byte - line_offsets[idx] + 1;
  };

  Span s;
  s.file_id = file_id;
  s.start_byte = start;
  s.end_byte = end;
  locate(start, s.start_line, s.start_col);
  locate(end, s.end_line, s.end_col);
  return s;
}

std::string_view SourceFile::slice(const Span& s) const {
  if (s.start_byte > content.size()) return {};
  return std::string_view(content).substr(s.start_byte, s.end_byte - s.start_byte);
}

std::uint32_t SourceFile::line_count() const {
  if (content.empty()) return 0;
  auto n = static_cast<std::uint32_t>(line_offsets.size());
  // A trailing newline does not open a new line of code.
  if (content.back() == '\n') --n;
  return n;
}

bool is_valid_utf8(std::string_view text) {
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const auto* end = p + text.size();
  while (p < end) {
    unsigned char c = *p;
    if (c < 0x80) {
      ++p;
      continue;
    }
    int len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (end - p < len) return false;
    for (int i = 1; i < len; ++i) {
      if ((p[i] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i] & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000))
      return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    p += len;
  }
  return true;
}

}  // namespace hooklens
