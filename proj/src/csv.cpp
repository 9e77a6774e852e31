#include "modelswitch/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace modelswitch {
namespace {

void append_double(std::string& buf, double v) {
  char tmp[32];
  auto res = std::to_chars(tmp, tmp + sizeof tmp, v,
                           std::chars_format::general, 17);
  buf.append(tmp, res.ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string at_line(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

}  // namespace

void write_csv(const Dataset& data, std::ostream& out) {
  data.validate();
  const std::size_t d = data.n_features();
  std::string buf;
  for (std::size_t j = 0; j < d; ++j) {
    buf += 'f';
    buf += std::to_string(j);
    buf += ',';
  }
  buf += "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      append_double(buf, data.x(i, j));
      buf += ',';
    }
    buf += data.y[i] == 1 ? '1' : '0';
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(data, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("no header", 0);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.empty()) throw ParseError("no header", 1);

  const auto header = split_fields(line);
  if (header.size() < 2 || header.back() != "label") {
    throw ParseError(at_line(1) + "header must be f0,...,f{d-1},label", 1);
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw ParseError(at_line(1) + "expected column name f" + std::to_string(j),
                       1);
    }
  }

  std::vector<double> values;
  Labels y;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != d + 1) {
      throw ParseError(at_line(line_no) + "expected " + std::to_string(d + 1) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      const auto f = fields[j];
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size() ||
          !std::isfinite(v)) {
        throw ParseError(at_line(line_no) + "bad numeric value '" +
                             std::string(f) + "' in column f" + std::to_string(j),
                         line_no);
      }
      values.push_back(v);
    }
    const auto lab = fields[d];
    if (lab != "0" && lab != "1") {
      throw ParseError(at_line(line_no) + "label must be 0 or 1, got '" +
                           std::string(lab) + "'",
                       line_no);
    }
    y.push_back(lab == "1" ? 1 : 0);
  }
  const std::size_t n = y.size();
  return Dataset{Matrix(n, d, std::move(values)), std::move(y), std::nullopt};
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(in);
}

}  // namespace modelswitch
