#include "ggse/graph.hpp"

#include "ggse/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ggse {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(Errc::Parse, "missing column '" + std::string(name) + "'");
  }
};

Table parse_table(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  if (text.starts_with("\xEF\xBB\xBF")) pos = 3;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(t.header.size()) + " fields");
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  if (t.header.empty()) throw Error(Errc::Parse, "missing header");
  return t;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<EdgeRecord> parse_edge_csv(std::string_view text) {
  const Table t = parse_table(text);
  const auto src = t.column("source");
  const auto dst = t.column("target");
  const auto wt = t.column("weight");
  const auto layer = t.column("layer");
  std::vector<EdgeRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    out.push_back({row[src], row[dst], parse_double(row[wt], t.line_numbers[r]), row[layer]});
  }
  return out;
}

std::vector<NodeRecord> parse_node_csv(std::string_view text) {
  const Table t = parse_table(text);
  const auto id = t.column("id");
  const auto label = t.column("label");
  const auto cls = t.column("class");
  std::vector<NodeRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back({row[id], row[label], row[cls]});
  return out;
}

std::vector<EdgeRecord> read_edge_csv(const std::filesystem::path& path) {
  return parse_edge_csv(slurp(path));
}

std::vector<NodeRecord> read_node_csv(const std::filesystem::path& path) {
  return parse_node_csv(slurp(path));
}

}  // namespace ggse
