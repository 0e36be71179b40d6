#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tiertune/error.hpp"
#include "tiertune/numfmt.hpp"
#include "tiertune/perfdb.hpp"

namespace tiertune::perfdb {

// Text format, one record per line after a header:
//   perfdb 1 records=N mean=m0,..,m8 std=s0,..,s8
//   config=c0,..,c8 seed=S params=HEX samples=f:t;f:t;...

namespace {

std::string join(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view field(std::string_view token, std::string_view key, std::size_t line) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key || token[key.size()] != '=')
    throw ParseError(line, "expected '" + std::string(key) + "=...'");
  return token.substr(key.size() + 1);
}

double number(std::string_view text, std::size_t line) {
  const auto v = parse_double(text);
  if (!v) throw ParseError(line, "bad number '" + std::string(text) + "'");
  return *v;
}

Vec vec(std::string_view text, std::size_t line) {
  const auto parts = split(text, ',');
  if (parts.size() != kDims) throw ParseError(line, "expected " + std::to_string(kDims) + " components");
  Vec v{};
  for (std::size_t i = 0; i < kDims; ++i) v[i] = number(parts[i], line);
  return v;
}

std::uint64_t hex(std::string_view text, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, "bad hex value '" + std::string(text) + "'");
  return v;
}

ExecutionRecord parse_record(std::string_view text, std::size_t line) {
  const auto tok = split(text, ' ');
  if (tok.size() != 4) throw ParseError(line, "record needs config, seed, params and samples");
  ExecutionRecord r;
  r.config = ConfigVector::from_array(vec(field(tok[0], "config", line), line));
  const auto seed = parse_u64(field(tok[1], "seed", line));
  if (!seed) throw ParseError(line, "bad seed");
  r.meta.seed = *seed;
  r.meta.params_hash = hex(field(tok[2], "params", line), line);
  for (std::string_view s : split(field(tok[3], "samples", line), ';')) {
    const auto ft = split(s, ':');
    if (ft.size() != 2) throw ParseError(line, "sample must be fraction:time");
    r.samples.push_back(Sample{number(ft[0], line), number(ft[1], line)});
  }
  try {
    r.config.validate();
    r.validate();
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  return r;
}

}  // namespace

void write_database(std::ostream& out, const Database& db) {
  out << "perfdb " << kFormatVersion << " records=" << db.size() << " mean=" << join(db.norm().mean)
      << " std=" << join(db.norm().stddev) << '\n';
  char buf[17];
  for (const auto& r : db.records()) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r.meta.params_hash, 16);
    (void)ec;
    out << "config=" << join(r.config.to_array()) << " seed=" << r.meta.seed << " params="
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << " samples=";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      if (i) out << ';';
      out << format_double(r.samples[i].fm_fraction) << ':' << format_double(r.samples[i].exec_time);
    }
    out << '\n';
  }
}

Database read_database(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto head = split(line, ' ');
  if (head.size() < 2 || head[0] != "perfdb") throw ParseError(1, "not a performance database");
  const auto version = parse_u64(head[1]);
  if (!version) throw ParseError(1, "bad version");
  if (*version != static_cast<std::uint64_t>(kFormatVersion))
    throw Error(Errc::VersionError, "unsupported database version " + std::string(head[1]));
  if (head.size() != 5) throw ParseError(1, "header needs records, mean and std");
  const auto count = parse_u64(field(head[2], "records", 1));
  if (!count) throw ParseError(1, "bad record count");
  NormStats stored;
  stored.mean = vec(field(head[3], "mean", 1), 1);
  stored.stddev = vec(field(head[4], "std", 1), 1);

  std::vector<ExecutionRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (records.size() == *count)
      throw ParseError(lineno, "more records than the header's " + std::to_string(*count));
    records.push_back(parse_record(line, lineno));
  }
  if (records.size() != *count)
    throw ParseError(lineno + 1, "truncated: " + std::to_string(records.size()) + " of " +
                                     std::to_string(*count) + " records");
  Database db(std::move(records));
  if (!(db.norm() == stored)) throw ParseError(1, "stored normalisation does not match the records");
  return db;
}

void save(const Database& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  write_database(out, db);
  out.flush();
  if (!out) throw Error(Errc::IoError, "write to " + path.string() + " failed");
}

Database load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_database(in);
}

}  // namespace tiertune::perfdb
