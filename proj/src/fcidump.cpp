// Copyright 2026 The molcirc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "molcirc/errors.hpp"
#include "molcirc/integrals.hpp"

namespace molcirc {

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Parses "KEY=v1,v2,..." assignments out of the namelist header text.
std::map<std::string, std::string> parse_namelist(const std::string& text, int line) {
  std::map<std::string, std::string> values;
  std::string key;
  std::string current;
  auto flush = [&] {
    if (!key.empty()) values[key] = current;
    key.clear();
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    // Find the next KEY= token.
    std::size_t eq = text.find('=', i);
    if (eq == std::string::npos) break;
    std::size_t start = eq;
    while (start > i && (std::isalnum(static_cast<unsigned char>(text[start - 1])) ||
                         text[start - 1] == '_'))
      --start;
    if (!key.empty()) {
      current = text.substr(i, start - i);
      flush();
    }
    key = upper(text.substr(start, eq - start));
    if (key.empty()) throw ParseError("malformed FCIDUMP header near '='", line);
    i = eq + 1;
  }
  if (!key.empty()) {
    current = text.substr(i);
    flush();
  }
  return values;
}

int header_int(const std::map<std::string, std::string>& values, const std::string& key,
               int line, bool required, int fallback) {
  auto it = values.find(key);
  if (it == values.end()) {
    if (required) throw ParseError("FCIDUMP header lacks " + key, line);
    return fallback;
  }
  std::string digits;
  for (char c : it->second) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!digits.empty()) break;
      continue;
    }
    digits.push_back(c);
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ParseError("FCIDUMP header value for " + key + " is not an integer", line);
  }
  return value;
}

double parse_value(const std::string& token, int line) {
  std::string t = token;
  for (char& c : t) {
    if (c == 'D' || c == 'd') c = 'E';  // Fortran exponent
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("non-numeric value '" + token + "'", line);
  }
  if (used != t.size()) throw ParseError("non-numeric value '" + token + "'", line);
  return v;
}

int parse_index(const std::string& token, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("non-integer orbital index '" + token + "'", line);
  }
  return v;
}

}  // namespace

MolecularIntegrals parse_fcidump(std::istream& in) {
  std::string header;
  std::string line;
  int line_no = 0;
  bool started = false;
  bool ended = false;
  while (!ended && std::getline(in, line)) {
    ++line_no;
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("expected '&FCI' header", line_no);
      }
      started = true;
      u = u.substr(pos + 4);
    }
    auto end_pos = u.find("&END");
    if (end_pos == std::string::npos) end_pos = u.find('/');
    if (end_pos != std::string::npos) {
      u = u.substr(0, end_pos);
      ended = true;
    }
    header += u + ' ';
  }
  if (!started) throw ParseError("empty FCIDUMP", line_no);
  if (!ended) throw ParseError("FCIDUMP header is not terminated by &END or /", line_no);

  const auto values = parse_namelist(header, line_no);
  const int norb = header_int(values, "NORB", line_no, true, 0);
  const int nelec = header_int(values, "NELEC", line_no, true, 0);
  const int ms2 = header_int(values, "MS2", line_no, false, nelec % 2);
  if (norb <= 0) throw ParseError("NORB must be positive", line_no);
  if (nelec < 0 || nelec > 2 * norb) throw ParseError("NELEC out of range", line_no);

  const auto n = static_cast<std::size_t>(norb);
  MolecularIntegrals out;
  out.h = Eigen::MatrixXd::Zero(norb, norb);
  out.g = TwoElectronTensor(n);
  out.coefficients = Eigen::MatrixXd::Identity(norb, norb);
  out.n_electrons = nelec;
  out.two_sz = ms2;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tokens[5];
    int count = 0;
    std::string extra;
    while (count < 5 && fields >> tokens[count]) ++count;
    if (count == 0) continue;
    if (count != 5 || (fields >> extra)) {
      throw ParseError("expected 'value i j k l'", line_no);
    }
    const double v = parse_value(tokens[0], line_no);
    int idx[4];
    for (int k = 0; k < 4; ++k) {
      idx[k] = parse_index(tokens[k + 1], line_no);
      if (idx[k] < 0 || idx[k] > norb) throw ParseError("orbital index out of range", line_no);
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      out.e_offset += v;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      out.g.set_symmetric(i - 1, j - 1, k - 1, l - 1, v);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      out.h(i - 1, j - 1) = v;
      out.h(j - 1, i - 1) = v;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // Orbital energies: informational only.
    } else {
      throw ParseError("unrecognized index pattern", line_no);
    }
  }
  return out;
}

MolecularIntegrals read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open FCIDUMP file " + path.string());
  return parse_fcidump(in);
}

void write_fcidump(const MolecularIntegrals& ints, std::ostream& out, double drop_below) {
  const std::size_t n = ints.n_orbitals();
  out << "&FCI NORB=" << n << ",NELEC=" << ints.n_electrons << ",MS2=" << ints.two_sz << ",\n";
  out << "  ORBSYM=";
  for (std::size_t k = 0; k < n; ++k) out << "1,";
  out << "\n  ISYM=1,\n&END\n";
  out << std::scientific << std::setprecision(16);
  auto record = [&](double v, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    out << std::setw(24) << v << ' ' << i << ' ' << j << ' ' << k << ' ' << l << '\n';
  };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= (r == p ? q : r); ++s) {
          const double v = ints.g(p, q, r, s);
          if (std::abs(v) > drop_below) record(v, p + 1, q + 1, r + 1, s + 1);
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = ints.h(p, q);
      if (std::abs(v) > drop_below) record(v, p + 1, q + 1, 0, 0);
    }
  record(ints.e_offset, 0, 0, 0, 0);
}

void write_fcidump(const MolecularIntegrals& ints, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write FCIDUMP file " + path.string());
  write_fcidump(ints, out);
}

}  // namespace molcirc
