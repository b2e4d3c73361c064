#include "ftjc/table_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>

#include "ftjc/error.hpp"

namespace ftjc {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw Error(ErrorKind::io, "malformed number '" + std::string(field) + "'");
  return value;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string render_table(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += '\t';
    out += table.columns[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw Error(ErrorKind::io, "table row width differs from header");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += '\t';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

Table parse_table(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorKind::io, "table has no header");
  Table table;
  for (auto name : split(lines[0], '\t')) table.columns.emplace_back(name);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], '\t');
    if (fields.size() != table.columns.size()) throw Error(ErrorKind::io, "table row width differs from header");
    auto& row = table.rows.emplace_back();
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_double(f));
  }
  return table;
}

std::string render_husimi(const HusimiGrid& grid) {
  const auto& s = grid.spec;
  std::string out = "resolution\t" + std::to_string(s.resolution) + "\tre_min\t" + format_double(s.re_min) +
                    "\tre_max\t" + format_double(s.re_max) + "\tim_min\t" + format_double(s.im_min) + "\tim_max\t" +
                    format_double(s.im_max) + '\n';
  for (int i_im = 0; i_im < s.resolution; ++i_im) {
    for (int i_re = 0; i_re < s.resolution; ++i_re) {
      if (i_re) out += '\t';
      out += format_double(grid.at(i_re, i_im));
    }
    out += '\n';
  }
  return out;
}

HusimiGrid parse_husimi(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorKind::io, "husimi file has no header");
  const auto head = split(lines[0], '\t');
  if (head.size() != 10 || head[0] != "resolution" || head[2] != "re_min" || head[4] != "re_max" ||
      head[6] != "im_min" || head[8] != "im_max")
    throw Error(ErrorKind::io, "malformed husimi header");
  HusimiGrid grid;
  grid.spec.resolution = static_cast<int>(parse_double(head[1]));
  grid.spec.re_min = parse_double(head[3]);
  grid.spec.re_max = parse_double(head[5]);
  grid.spec.im_min = parse_double(head[7]);
  grid.spec.im_max = parse_double(head[9]);
  const auto res = static_cast<std::size_t>(grid.spec.resolution);
  if (res < 2 || lines.size() != res + 1) throw Error(ErrorKind::io, "husimi row count differs from resolution");
  grid.values.reserve(res * res);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], '\t');
    if (fields.size() != res) throw Error(ErrorKind::io, "husimi row width differs from resolution");
    for (auto f : fields) grid.values.push_back(parse_double(f));
  }
  return grid;
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw Error(ErrorKind::io, "sha256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw Error(ErrorKind::io, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace ftjc
