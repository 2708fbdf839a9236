#pragma once

#include <string>

#include "hk/common.hpp"

// Fiber-type bookkeeping shared across modules: Euler numbers, the sector
// angle beta and torus modulus tau of the flat model attached to each finite
// monodromy type, its distortion order, and the rank of H^2 of the associated
// isotrivial space.

namespace hk {

enum class KodairaType { I0, I, Istar, II, III, IV, IVstar, IIIstar, IIstar };

struct KodairaFiber {
  KodairaType type = KodairaType::I0;
  int nu = 0;  // multiplicity for I and I*
};

inline bool needs_nu(KodairaType t) {
  return t == KodairaType::I || t == KodairaType::Istar;
}

inline int euler_number(const KodairaFiber& f) {
  switch (f.type) {
    case KodairaType::I0: return 0;
    case KodairaType::I:
      if (f.nu < 1) throw InvalidConfig("euler_number: type I needs nu >= 1");
      return f.nu;
    case KodairaType::Istar:
      if (f.nu < 0) throw InvalidConfig("euler_number: type I* needs nu >= 0");
      return f.nu + 6;
    case KodairaType::II: return 2;
    case KodairaType::III: return 3;
    case KodairaType::IV: return 4;
    case KodairaType::IVstar: return 8;
    case KodairaType::IIIstar: return 9;
    case KodairaType::IIstar: return 10;
  }
  throw InvalidConfig("euler_number: unknown type");
}

// finite monodromy types carry a flat sector model; I* means I0* here
inline bool has_sector_model(KodairaType t) {
  switch (t) {
    case KodairaType::Istar:
    case KodairaType::II:
    case KodairaType::III:
    case KodairaType::IV:
    case KodairaType::IVstar:
    case KodairaType::IIIstar:
    case KodairaType::IIstar: return true;
    default: return false;
  }
}

inline Rational sector_beta(KodairaType t) {
  switch (t) {
    case KodairaType::Istar: return {1, 2};
    case KodairaType::IIstar: return {1, 6};
    case KodairaType::II: return {5, 6};
    case KodairaType::IIIstar: return {1, 4};
    case KodairaType::III: return {3, 4};
    case KodairaType::IVstar: return {1, 3};
    case KodairaType::IV: return {2, 3};
    default: throw InvalidPair("sector_beta: no flat sector model for this type");
  }
}

// torus modulus of the flat model; I0* leaves it free (imag part 0 marks that)
inline cplx sector_tau(KodairaType t) {
  const cplx w = std::exp(cplx(0.0, TWO_PI / 3.0));
  switch (t) {
    case KodairaType::Istar: return cplx(0, 0);
    case KodairaType::IIstar:
    case KodairaType::II:
    case KodairaType::IVstar:
    case KodairaType::IV: return w;
    case KodairaType::IIIstar:
    case KodairaType::III: return cplx(0, 1);
    default: throw InvalidPair("sector_tau: no flat sector model for this type");
  }
}

inline Rational distortion_order(KodairaType t) {
  switch (t) {
    case KodairaType::Istar: return {2, 1};
    case KodairaType::IIstar: return {4, 1};
    case KodairaType::II: return {2, 5};
    case KodairaType::IIIstar: return {2, 1};
    case KodairaType::III: return {2, 3};
    case KodairaType::IVstar: return {1, 1};
    case KodairaType::IV: return {1, 1};
    default: throw InvalidPair("distortion_order: no flat sector model for this type");
  }
}

inline int sector_h2_rank(KodairaType t) {
  switch (t) {
    case KodairaType::Istar: return 5;
    case KodairaType::IIstar: return 9;
    case KodairaType::II: return 1;
    case KodairaType::IIIstar: return 8;
    case KodairaType::III: return 2;
    case KodairaType::IVstar: return 7;
    case KodairaType::IV: return 3;
    default: throw InvalidPair("sector_h2_rank: no flat sector model for this type");
  }
}

inline std::string to_string(const KodairaFiber& f) {
  switch (f.type) {
    case KodairaType::I0: return "I0";
    case KodairaType::I: return "I" + std::to_string(f.nu);
    case KodairaType::Istar: return "I" + std::to_string(f.nu) + "*";
    case KodairaType::II: return "II";
    case KodairaType::III: return "III";
    case KodairaType::IV: return "IV";
    case KodairaType::IVstar: return "IV*";
    case KodairaType::IIIstar: return "III*";
    case KodairaType::IIstar: return "II*";
  }
  return "?";
}

// accepts I0, I<nu>, I<nu>*, II, III, IV and their starred forms
inline KodairaFiber parse_fiber(const std::string& s) {
  if (s.empty()) throw InvalidConfig("parse_fiber: empty label");
  std::string body = s;
  bool star = false;
  if (body.back() == '*') {
    star = true;
    body.pop_back();
  }
  if (body == "II") return {star ? KodairaType::IIstar : KodairaType::II, 0};
  if (body == "III") return {star ? KodairaType::IIIstar : KodairaType::III, 0};
  if (body == "IV") return {star ? KodairaType::IVstar : KodairaType::IV, 0};
  if (body.size() >= 2 && body[0] == 'I') {
    int nu = 0;
    try {
      nu = std::stoi(body.substr(1));
    } catch (...) {
      throw InvalidConfig("parse_fiber: bad multiplicity in '" + s + "'");
    }
    if (nu < 0) throw InvalidConfig("parse_fiber: negative multiplicity");
    if (star) return {KodairaType::Istar, nu};
    if (nu == 0) return {KodairaType::I0, 0};
    return {KodairaType::I, nu};
  }
  throw InvalidConfig("parse_fiber: unrecognized label '" + s + "'");
}

}  // namespace hk
