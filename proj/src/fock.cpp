#include "slicesim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace slicesim {

OccupancyCoefficients::OccupancyCoefficients(unsigned mode_count, unsigned max_total)
    : mode_count_(mode_count), max_total_(max_total) {
  if (mode_count == 0) throw ConfigError("fock: need at least one mode");
}

void OccupancyCoefficients::set(FockKey key, cplx value) {
  if (!std::is_sorted(key.begin(), key.end()))
    throw ConfigError("fock: keys must be sorted non-decreasing");
  for (unsigned i : key)
    if (i >= mode_count_) throw ConfigError("fock: key index out of range");
  if (key.size() > max_total_) throw ConfigError("fock: key exceeds max_total");
  if (value == cplx(0))
    terms_.erase(key);
  else
    terms_[std::move(key)] = value;
}

cplx OccupancyCoefficients::get(const FockKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? cplx(0) : it->second;
}

double OccupancyCoefficients::norm2() const {
  double s = 0;
  for (const auto& [k, v] : terms_) s += std::norm(v);
  return s;
}

unsigned OccupancyCoefficients::occupancy(const FockKey& key, unsigned s) const {
  return unsigned(std::count(key.begin(), key.end(), s));
}

CreateResult create(unsigned s, const OccupancyCoefficients& c) {
  if (s >= c.mode_count()) throw ConfigError("create: invalid mode index");
  CreateResult out{OccupancyCoefficients(c.mode_count(), c.max_total()), 0.0};
  for (const auto& [key, coeff] : c.terms()) {
    const unsigned ns = c.occupancy(key, s);
    const cplx nv = coeff * std::sqrt(double(ns) + 1.0);
    if (key.size() + 1 > c.max_total()) {
      out.dropped_weight += std::norm(nv);
      continue;
    }
    FockKey nk = key;
    nk.insert(std::upper_bound(nk.begin(), nk.end(), s), s);
    const cplx existing = out.coeffs.get(nk);
    out.coeffs.set(std::move(nk), existing + nv);
  }
  return out;
}

OccupancyCoefficients annihilate(unsigned s, const OccupancyCoefficients& c) {
  if (s >= c.mode_count()) throw ConfigError("annihilate: invalid mode index");
  OccupancyCoefficients out(c.mode_count(), c.max_total());
  for (const auto& [key, coeff] : c.terms()) {
    const unsigned ns = c.occupancy(key, s);
    if (ns == 0) continue;  // includes the vacuum
    FockKey nk = key;
    nk.erase(std::find(nk.begin(), nk.end(), s));
    out.set(nk, out.get(nk) + coeff * std::sqrt(double(ns)));
  }
  return out;
}

OccupancyCoefficients number(unsigned s, const OccupancyCoefficients& c) {
  return create(s, annihilate(s, c)).coeffs;
}

double commutator_check(unsigned s, unsigned t, const OccupancyCoefficients& c) {
  if (s >= c.mode_count() || t >= c.mode_count())
    throw ConfigError("commutator_check: invalid mode index");
  for (const auto& [key, coeff] : c.terms())
    if (key.size() + 1 > c.max_total())
      throw ConfigError("commutator_check: state touches the truncation edge");
  const OccupancyCoefficients lhs = annihilate(s, create(t, c).coeffs);
  const OccupancyCoefficients rhs = create(t, annihilate(s, c)).coeffs;
  double max_res = 0;
  auto scan = [&](const std::map<FockKey, cplx>& keys) {
    for (const auto& [key, unused] : keys) {
      (void)unused;
      cplx r = lhs.get(key) - rhs.get(key);
      if (s == t) r -= c.get(key);
      max_res = std::max(max_res, std::abs(r));
    }
  };
  scan(lhs.terms());
  scan(rhs.terms());
  scan(c.terms());
  return max_res;
}

RaiseResult phonon_raise(const NormalModeSet& modes, int s, const PhononOccupancy& occ) {
  if (s < 0 || s >= int(modes.modes.size()))
    throw ConfigError("phonon_raise: mode removed or out of range");
  RaiseResult out;
  out.occupancy = occ;
  const int ns = [&] {
    auto it = occ.n.find(s);
    return it == occ.n.end() ? 0 : it->second;
  }();
  out.occupancy.n[s] = ns + 1;
  out.factor = std::sqrt(double(ns) + 1.0);
  return out;
}

void write_coefficients(const OccupancyCoefficients& c, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("write_coefficients: cannot open " + path);
  std::fprintf(fp, "# N\tkey\tre\tim\n");
  for (const auto& [key, v] : c.terms()) {
    std::string k;
    for (std::size_t i = 0; i < key.size(); i++) {
      if (i) k += '-';
      k += std::to_string(key[i]);
    }
    if (k.empty()) k = "-";
    std::fprintf(fp, "%zu\t%s\t%.17g\t%.17g\n", key.size(), k.c_str(), v.real(), v.imag());
  }
  std::fclose(fp);
}

}  // namespace slicesim
