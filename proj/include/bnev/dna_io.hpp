#pragma once

// DNA input files. Comma-separated with a mandatory header row; blank lines
// and lines starting with '#' are ignored.
//
//   frequencies: marker,allele,population,frequency
//   mixture:     population,weight
//   profile:     marker,allele1,allele2

#include <sstream>
#include <string>
#include <vector>

#include "bnev/dna.hpp"
#include "bnev/network_file.hpp"

namespace bnev::dna {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& text, const std::string& what,
                                                      const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    const std::string where = what + " line " + std::to_string(lineno);
    if (!seen_header) {
      if (cells != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorKind::parse, where + ": expected header '" + want + "'");
      }
      seen_header = true;
      continue;
    }
    if (cells.size() != header.size())
      throw Error(ErrorKind::parse, where + ": expected " + std::to_string(header.size()) + " columns");
    cells.push_back(where);  // carried for later diagnostics
    rows.push_back(std::move(cells));
  }
  if (!seen_header) throw Error(ErrorKind::parse, what + ": missing header");
  return rows;
}

inline double parse_probability(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::parse, where + ": '" + cell + "' is not a number");
}

}  // namespace detail

inline AlleleFrequencyTable parse_frequencies(const std::string& text) {
  AlleleFrequencyTable t;
  for (const auto& r : detail::read_csv(text, "frequencies", {"marker", "allele", "population", "frequency"})) {
    const double f = detail::parse_probability(r[3], r[4]);
    if (!(f > 0.0 && f <= 1.0)) throw Error(ErrorKind::invalid_input, r[4] + ": frequency must lie in (0,1]");
    t.set(r[0], r[1], r[2], f);
  }
  return t;
}

inline PopulationMixture parse_mixture(const std::string& text) {
  PopulationMixture m;
  for (const auto& r : detail::read_csv(text, "mixture", {"population", "weight"})) {
    m.populations.push_back(r[0]);
    m.weights.push_back(detail::parse_probability(r[1], r[2]));
  }
  m.validate();
  return m;
}

inline CrimeProfile parse_profile(const std::string& text) {
  CrimeProfile p;
  for (const auto& r : detail::read_csv(text, "profile", {"marker", "allele1", "allele2"}))
    p.markers.push_back({r[0], {r[1], r[2]}});
  if (p.markers.empty()) throw Error(ErrorKind::invalid_input, "empty profile");
  return p;
}

inline std::string emit_frequencies(const AlleleFrequencyTable& t) {
  std::ostringstream out;
  out << "marker,allele,population,frequency\n";
  t.for_each([&](const std::string& m, const std::string& a, const std::string& p, double f) {
    out << m << ',' << a << ',' << p << ',' << ojson(f).dump() << '\n';
  });
  return out.str();
}

inline std::string emit_mixture(const PopulationMixture& m) {
  std::ostringstream out;
  out << "population,weight\n";
  for (std::size_t i = 0; i < m.populations.size(); ++i)
    out << m.populations[i] << ',' << ojson(m.weights[i]).dump() << '\n';
  return out.str();
}

inline std::string emit_profile(const CrimeProfile& p) {
  std::ostringstream out;
  out << "marker,allele1,allele2\n";
  for (const auto& m : p.markers) out << m.marker << ',' << m.genotype.allele1 << ',' << m.genotype.allele2 << '\n';
  return out.str();
}

inline DnaInputs load_inputs(const std::string& freqs_path, const std::string& mixture_path,
                             const std::string& profile_path) {
  auto wrap = [](const std::string& path, auto&& fn) {
    try {
      return fn(read_file(path));
    } catch (const Error& e) {
      throw Error(e.kind(), path + ": " + e.what());
    }
  };
  DnaInputs in;
  in.freqs = wrap(freqs_path, parse_frequencies);
  in.mixture = wrap(mixture_path, parse_mixture);
  in.profile = wrap(profile_path, parse_profile);
  in.validate();
  return in;
}

/// JSON upload form used by the HTTP service:
/// {"frequencies": [{"marker","allele","population","frequency"}...],
///  "mixture": [{"population","weight"}...],
///  "profile": [{"marker","allele1","allele2"}...],
///  "origin_population": "Samoan"}
inline DnaInputs inputs_from_json(const ojson& j) {
  using bnev::detail::as_number;
  using bnev::detail::as_string;
  using bnev::detail::field;
  DnaInputs in;
  bnev::detail::for_each_item(j, "frequencies", "", [&](const ojson& r, const std::string& p) {
    in.freqs.set(as_string(field(r, "marker", p), p + ".marker"), as_string(field(r, "allele", p), p + ".allele"),
                 as_string(field(r, "population", p), p + ".population"),
                 as_number(field(r, "frequency", p), p + ".frequency"));
  });
  bnev::detail::for_each_item(j, "mixture", "", [&](const ojson& r, const std::string& p) {
    in.mixture.populations.push_back(as_string(field(r, "population", p), p + ".population"));
    in.mixture.weights.push_back(as_number(field(r, "weight", p), p + ".weight"));
  });
  bnev::detail::for_each_item(j, "profile", "", [&](const ojson& r, const std::string& p) {
    in.profile.markers.push_back({as_string(field(r, "marker", p), p + ".marker"),
                                  {as_string(field(r, "allele1", p), p + ".allele1"),
                                   as_string(field(r, "allele2", p), p + ".allele2")}});
  });
  if (auto o = j.find("origin_population"); o != j.end()) in.origin_population = as_string(*o, "origin_population");
  in.validate();
  return in;
}

}  // namespace bnev::dna
