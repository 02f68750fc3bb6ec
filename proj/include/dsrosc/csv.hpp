#ifndef DSROSC_CSV_HPP
#define DSROSC_CSV_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace dsrosc::csv {

/// 9 significant digits in scientific notation, independent of the C locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0.0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 8);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_integer(std::string_view s) {
  Int v{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Delimited table writer: '#' comment lines, one header line, rows.
class Writer {
 public:
  Writer(std::ostream& os, char sep) : os_(os), sep_(sep) {}

  void comment(std::string_view text) { os_ << "# " << text << '\n'; }

  void header(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (auto c : columns) {
      if (!first) os_ << sep_;
      os_ << c;
      first = false;
    }
    os_ << '\n';
  }

  Writer& field(std::string_view s) {
    if (!row_start_) os_ << sep_;
    os_ << s;
    row_start_ = false;
    return *this;
  }
  Writer& field(const char* s) { return field(std::string_view(s)); }
  Writer& field(const std::string& s) { return field(std::string_view(s)); }
  Writer& field(double v) { return field(std::string_view(format_number(v))); }
  Writer& field(std::uint64_t v) { return field(std::string_view(std::to_string(v))); }
  Writer& field(bool v) { return field(std::string_view(v ? "1" : "0")); }

  void end_row() {
    os_ << '\n';
    row_start_ = true;
  }

 private:
  std::ostream& os_;
  char sep_;
  bool row_start_ = true;
};

}  // namespace dsrosc::csv

#endif
