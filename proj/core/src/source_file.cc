#include "cctm/source_file.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cctm/error.h"

namespace cctm {
namespace fs = std::filesystem;

namespace {

// Length of the well-formed UTF-8 sequence starting at `i`, or 0.
std::size_t Utf8SequenceLength(std::string_view s, std::size_t i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(s[k]);
  };
  const unsigned char lead = byte(i);
  if (lead < 0x80) return 1;
  std::size_t length;
  unsigned char lo = 0x80, hi = 0xBF;
  if (lead >= 0xC2 && lead <= 0xDF) {
    length = 2;
  } else if (lead >= 0xE0 && lead <= 0xEF) {
    length = 3;
    if (lead == 0xE0) lo = 0xA0;
    if (lead == 0xED) hi = 0x9F;
  } else if (lead >= 0xF0 && lead <= 0xF4) {
    length = 4;
    if (lead == 0xF0) lo = 0x90;
    if (lead == 0xF4) hi = 0x8F;
  } else {
    return 0;
  }
  if (i + length > s.size()) return 0;
  if (byte(i + 1) < lo || byte(i + 1) > hi) return 0;
  for (std::size_t k = 2; k < length; ++k) {
    if (byte(i + k) < 0x80 || byte(i + k) > 0xBF) return 0;
  }
  return length;
}

}  // namespace

std::string SanitizeUtf8(std::string_view bytes, std::size_t* replaced) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < bytes.size();) {
    const std::size_t length = Utf8SequenceLength(bytes, i);
    if (length == 0) {
      out += "\xEF\xBF\xBD";
      ++count;
      ++i;
    } else {
      out.append(bytes.substr(i, length));
      i += length;
    }
  }
  if (replaced != nullptr) *replaced = count;
  return out;
}

SourceFile MakeSourceFile(std::string path, std::string_view bytes,
                          std::optional<Language> language_override) {
  SourceFile file;
  file.language = language_override.value_or(DetectLanguage(path));
  file.path = std::move(path);
  file.content = SanitizeUtf8(bytes, &file.replaced_bytes);
  return file;
}

SourceFile ReadSourceFile(const fs::path& path,
                          std::optional<Language> language_override,
                          std::string display_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("IoError", "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw DataError("IoError", "read failed for " + path.string());
  }
  if (display_path.empty()) display_path = path.generic_string();
  SourceFile file = MakeSourceFile(std::move(display_path), buffer.str(),
                                   language_override);
  if (file.language == Language::kUnknown) {
    file.language = DetectLanguage(path.string());
  }
  return file;
}

std::vector<SourceEntry> CollectSourceFiles(
    const std::vector<fs::path>& inputs,
    std::optional<Language> language_override,
    std::vector<std::string>* diagnostics) {
  std::vector<SourceEntry> entries;
  const bool prefix_roots = inputs.size() > 1;
  for (const fs::path& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      fs::recursive_directory_iterator it(
          input, fs::directory_options::skip_permission_denied, ec);
      if (ec) {
        if (diagnostics) diagnostics->push_back(input.string() + ": " + ec.message());
        continue;
      }
      for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
          if (diagnostics) diagnostics->push_back(input.string() + ": " + ec.message());
          break;
        }
        if (!it->is_regular_file(ec)) continue;
        const fs::path& file = it->path();
        if (!language_override &&
            DetectLanguage(file.string()) == Language::kUnknown) {
          continue;
        }
        std::string display = file.lexically_relative(input).generic_string();
        if (prefix_roots) display = (input / display).generic_string();
        entries.push_back({file, std::move(display)});
      }
    } else if (fs::exists(input, ec)) {
      entries.push_back({input, input.generic_string()});
    } else if (diagnostics) {
      diagnostics->push_back(input.string() + ": no such file or directory");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const SourceEntry& a, const SourceEntry& b) {
              return a.display_path < b.display_path;
            });
  return entries;
}

}  // namespace cctm
