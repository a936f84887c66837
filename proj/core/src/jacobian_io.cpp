#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "goom/lyapunov.hpp"

namespace goom {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("goomjac line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t begin = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > begin) out.push_back(s.substr(begin, i - begin));
  }
  return out;
}

template <class Number>
Number parse_number(std::string_view token, std::size_t line, const char* what) {
  Number value{};
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) parse_error(line, std::string("bad ") + what + " '" + std::string(token) + "'");
  return value;
}

std::string_view strip_key(std::string_view token, std::string_view key, std::size_t line) {
  if (token.substr(0, key.size()) != key) parse_error(line, "expected '" + std::string(key) + "...'");
  return token.substr(key.size());
}

std::string_view chomp(const std::string& s) {
  std::string_view v = s;
  if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
  return v;
}

}  // namespace

void write_goomjac(std::ostream& out, const JacobianChain& chain) {
  chain.validate();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", chain.dt);
  out << "goomjac v1 d=" << chain.dim << " T=" << chain.T() << " dt=" << buf << '\n';
  for (const auto& m : chain.mats) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
        if (c > 0) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("goomjac: write failed");
}

void write_goomjac_file(const std::string& path, const JacobianChain& chain) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("goomjac: cannot open '" + path + "' for writing");
  write_goomjac(out, chain);
}

JacobianChain read_goomjac(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) parse_error(lineno, "missing header");

  const auto header = split_spaces(chomp(line));
  if (header.size() != 5 || header[0] != "goomjac" || header[1] != "v1")
    parse_error(lineno, "expected 'goomjac v1 d=<d> T=<T> dt=<dt>'");
  JacobianChain chain;
  chain.dim = parse_number<std::size_t>(strip_key(header[2], "d=", lineno), lineno, "dimension");
  const auto T = parse_number<std::size_t>(strip_key(header[3], "T=", lineno), lineno, "length");
  chain.dt = parse_number<double>(strip_key(header[4], "dt=", lineno), lineno, "dt");
  if (chain.dim == 0) parse_error(lineno, "d must be positive");
  if (T == 0) parse_error(lineno, "T must be positive");
  if (!(chain.dt > 0.0) || !std::isfinite(chain.dt)) parse_error(lineno, "dt must be positive and finite");

  const auto d = static_cast<Eigen::Index>(chain.dim);
  chain.mats.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      ++lineno;
      if (!std::getline(in, line)) parse_error(lineno, "unexpected end of file in block " + std::to_string(t + 1));
      const auto tokens = split_spaces(chomp(line));
      if (tokens.size() != chain.dim)
        parse_error(lineno, "expected " + std::to_string(chain.dim) + " values, found " + std::to_string(tokens.size()));
      for (Eigen::Index c = 0; c < d; ++c) {
        const double v = parse_number<double>(tokens[static_cast<std::size_t>(c)], lineno, "value");
        if (!std::isfinite(v)) parse_error(lineno, "non-finite value");
        m(r, c) = v;
      }
    }
    chain.mats.push_back(std::move(m));
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (!split_spaces(chomp(line)).empty()) parse_error(lineno, "trailing content after the last block");
  }
  return chain;
}

JacobianChain read_goomjac_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("goomjac: cannot open '" + path + "'");
  return read_goomjac(in);
}

}  // namespace goom
