#pragma once

#include <cctype>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "rtgap/errors.hpp"

namespace rtgap {

enum class Family { SLnR, SLnC, Sp2nR, SOn1, SUn1, Spn1, SplitSimple };

enum class CartanType { A, B, C, D, E, F, G, BC };

/// A real semisimple group from the catalog, named by family and parameter.
///
/// `n` is the family parameter: SL(n,R) and SL(n,C) use the matrix size,
/// Sp(2n,R) uses n, SO(n,1), SU(n,1) and Sp(n,1) use n. For split simple
/// groups `split_type` and `n` (the rank) name the Dynkin diagram.
struct GroupDescriptor {
  Family family = Family::SLnR;
  int n = 2;
  CartanType split_type = CartanType::A;

  static GroupDescriptor sl_r(int n) { return {Family::SLnR, n, CartanType::A}; }
  static GroupDescriptor sl_c(int n) { return {Family::SLnC, n, CartanType::A}; }
  static GroupDescriptor sp_r(int n) { return {Family::Sp2nR, n, CartanType::C}; }
  static GroupDescriptor so_n1(int n) { return {Family::SOn1, n, CartanType::A}; }
  static GroupDescriptor su_n1(int n) { return {Family::SUn1, n, CartanType::BC}; }
  static GroupDescriptor sp_n1(int n) { return {Family::Spn1, n, CartanType::BC}; }
  static GroupDescriptor split(CartanType t, int rank) { return {Family::SplitSimple, rank, t}; }

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

inline char cartan_letter(CartanType t) {
  switch (t) {
    case CartanType::A: return 'A';
    case CartanType::B: return 'B';
    case CartanType::C: return 'C';
    case CartanType::D: return 'D';
    case CartanType::E: return 'E';
    case CartanType::F: return 'F';
    case CartanType::G: return 'G';
    case CartanType::BC: break;
  }
  return '?';
}

/// Throws UnsupportedDescriptor if the parameters are outside the catalog.
inline void validate(const GroupDescriptor& d) {
  auto fail = [&](const std::string& why) { throw UnsupportedDescriptor(why); };
  switch (d.family) {
    case Family::SLnR:
    case Family::SLnC:
    case Family::Sp2nR:
    case Family::SOn1:
    case Family::SUn1:
    case Family::Spn1:
      if (d.n < 2) fail("family parameter must be >= 2, got " + std::to_string(d.n));
      if (d.n > 64) fail("family parameter too large: " + std::to_string(d.n));
      return;
    case Family::SplitSimple:
      break;
  }
  const int r = d.n;
  switch (d.split_type) {
    case CartanType::A:
      if (r < 1 || r > 16) fail("split A_n needs 1 <= n <= 16");
      return;
    case CartanType::B:
    case CartanType::C:
      if (r < 2 || r > 16) fail("split B_n/C_n needs 2 <= n <= 16");
      return;
    case CartanType::D:
      if (r < 3 || r > 16) fail("split D_n needs 3 <= n <= 16");
      return;
    case CartanType::E:
      if (r < 6 || r > 8) fail("split E_n needs n in {6,7,8}");
      return;
    case CartanType::F:
      if (r != 4) fail("split F has rank 4 only");
      return;
    case CartanType::G:
      if (r != 2) fail("split G has rank 2 only");
      return;
    case CartanType::BC:
      fail("BC is not a split type");
  }
}

inline std::string to_string(const GroupDescriptor& d) {
  const std::string n = std::to_string(d.n);
  switch (d.family) {
    case Family::SLnR: return "SL(" + n + ",R)";
    case Family::SLnC: return "SL(" + n + ",C)";
    case Family::Sp2nR: return "Sp(" + std::to_string(2 * d.n) + ",R)";
    case Family::SOn1: return "SO(" + n + ",1)";
    case Family::SUn1: return "SU(" + n + ",1)";
    case Family::Spn1: return "Sp(" + n + ",1)";
    case Family::SplitSimple: return std::string("split:") + cartan_letter(d.split_type) + n;
  }
  return "?";
}

/// Parses "SL(3,R)", "SL(2,C)", "Sp(4,R)", "SO(4,1)", "SU(2,1)", "Sp(2,1)",
/// "split:E8", "split:B3".
inline GroupDescriptor parse_group(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);

  static const std::regex matrix_re(R"(^(SL|Sp|SO|SU)\((\d+),([RC1])\)$)", std::regex::icase);
  static const std::regex split_re(R"(^split:([ABCDEFG])(\d+)$)", std::regex::icase);
  std::smatch m;
  GroupDescriptor d;
  if (std::regex_match(s, m, matrix_re)) {
    std::string fam = m[1].str();
    for (auto& c : fam) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const int n = std::stoi(m[2].str());
    const char field = static_cast<char>(std::toupper(static_cast<unsigned char>(m[3].str()[0])));
    if (fam == "SL" && field == 'R') d = GroupDescriptor::sl_r(n);
    else if (fam == "SL" && field == 'C') d = GroupDescriptor::sl_c(n);
    else if (fam == "SP" && field == 'R') {
      if (n % 2 != 0) throw UnsupportedDescriptor("Sp(2n,R) needs an even matrix size");
      d = GroupDescriptor::sp_r(n / 2);
    } else if (fam == "SO" && field == '1') d = GroupDescriptor::so_n1(n);
    else if (fam == "SU" && field == '1') d = GroupDescriptor::su_n1(n);
    else if (fam == "SP" && field == '1') d = GroupDescriptor::sp_n1(n);
    else throw UnsupportedDescriptor("unsupported group: " + std::string(text));
  } else if (std::regex_match(s, m, split_re)) {
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(m[1].str()[0])));
    const int r = std::stoi(m[2].str());
    CartanType t{};
    switch (letter) {
      case 'A': t = CartanType::A; break;
      case 'B': t = CartanType::B; break;
      case 'C': t = CartanType::C; break;
      case 'D': t = CartanType::D; break;
      case 'E': t = CartanType::E; break;
      case 'F': t = CartanType::F; break;
      default: t = CartanType::G; break;
    }
    d = GroupDescriptor::split(t, r);
  } else {
    throw UnsupportedDescriptor("cannot parse group descriptor: " + std::string(text));
  }
  validate(d);
  return d;
}

/// A representative sample of the catalog: small members of every family and
/// every split type up to rank 8.
inline std::vector<GroupDescriptor> catalog_sample() {
  std::vector<GroupDescriptor> out;
  for (int n = 2; n <= 5; ++n) out.push_back(GroupDescriptor::sl_r(n));
  for (int n = 2; n <= 4; ++n) out.push_back(GroupDescriptor::sl_c(n));
  for (int n = 2; n <= 3; ++n) out.push_back(GroupDescriptor::sp_r(n));
  for (int n = 2; n <= 5; ++n) out.push_back(GroupDescriptor::so_n1(n));
  for (int n = 2; n <= 3; ++n) out.push_back(GroupDescriptor::su_n1(n));
  for (int n = 2; n <= 3; ++n) out.push_back(GroupDescriptor::sp_n1(n));
  for (int r = 1; r <= 8; ++r) out.push_back(GroupDescriptor::split(CartanType::A, r));
  for (int r = 2; r <= 8; ++r) out.push_back(GroupDescriptor::split(CartanType::B, r));
  for (int r = 2; r <= 8; ++r) out.push_back(GroupDescriptor::split(CartanType::C, r));
  for (int r = 3; r <= 8; ++r) out.push_back(GroupDescriptor::split(CartanType::D, r));
  for (int r = 6; r <= 8; ++r) out.push_back(GroupDescriptor::split(CartanType::E, r));
  out.push_back(GroupDescriptor::split(CartanType::F, 4));
  out.push_back(GroupDescriptor::split(CartanType::G, 2));
  return out;
}

}  // namespace rtgap
