#pragma once

#include "fgm/formal_module.hpp"

namespace fixtures {

using namespace fgm;

inline HondaType make_type(u64 p, i64 pi, std::vector<i64> a) {
  HondaType u;
  u.p = p;
  u.pi = pi;
  u.a.push_back(0);
  for (i64 x : a) u.a.push_back(x);
  return u;
}

// Multiplicative group over L = Q_3(zeta_3), M unramified cubic over L.
struct A1 {
  Precision prec{12, 6};
  TowerPtr L = FieldTower::build(3, {StepSpec::eisenstein_int({3, 3})}, prec);
  TowerPtr M = L->extend(StepSpec::unramified(3));
  GroupPtr F = FormalGroup::from_logarithm(make_type(3, 3, {-1}), multiplicative_log(36), prec);
  FormalModule mod{F, L, M};
};

// Group with [2](x) = 2x + x^2 over L = Q_2, M unramified quadratic.
struct A2 {
  Precision prec{12, 8};
  TowerPtr L = FieldTower::base(2, prec);
  TowerPtr M = L->extend(StepSpec::unramified(2));
  GroupPtr F = FormalGroup::from_logarithm(make_type(2, 2, {-1}), [] {
    QSeries1 e(20);
    e[1] = 2, e[2] = 1;
    return log_from_endomorphism(e);
  }(), prec);
  FormalModule mod{F, L, M};
};

// Height two group of type 2 - T^2; L is Q_4(cube root of -2), so L has
// degree 6 over Q_2 and contains all of W^1; M unramified quadratic over L.
struct Stretch {
  Precision prec{12, 4};
  TowerPtr L = FieldTower::build(2, {StepSpec::unramified(2), StepSpec::eisenstein({{2}, {0}, {0}})}, prec);
  TowerPtr M = L->extend(StepSpec::unramified(2));
  GroupPtr F = FormalGroup::from_type(make_type(2, 2, {0, -1}), 48, prec);
  FormalModule mod{F, L, M};
};

}  // namespace fixtures
