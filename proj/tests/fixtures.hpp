#pragma once

// Matrices transcribed by hand from their published form.

#include "copekit/cope.hpp"

namespace fixtures {

using copekit::Matrix;
using copekit::Rational;

inline Rational h() { return Rational(1, 2); }

inline Matrix<Rational> spekkens_stacked() {
  return {{1, 0, h(), h(), h(), h()}, {0, 1, h(), h(), h(), h()}, {h(), h(), 1, 0, h(), h()},
          {h(), h(), 0, 1, h(), h()}, {h(), h(), h(), h(), 1, 0}, {h(), h(), h(), h(), 0, 1}};
}

// Four preparations and two measurements of the toy theory.
inline Matrix<Rational> fragment_a1() {
  return {{1, 0, h(), h()}, {0, 1, h(), h()}, {h(), h(), 1, 0}, {h(), h(), 0, 1}};
}

inline Matrix<Rational> boxworld_stacked() { return {{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}}; }

inline Matrix<Rational> ebw_stacked() {
  return {{0, 0, 0, 0, 1, 1}, {1, 0, 0, 1, 0, 0}, {0, 1, 1, 0, 0, 0},
          {0, 0, 0, 0, 1, 1}, {1, 0, 1, 0, 0, 0}, {0, 1, 0, 1, 0, 0}};
}

inline Matrix<Rational> ebw_quotient() {
  return {{0, 0, 0, 0, 1}, {1, 0, 0, 1, 0}, {0, 1, 1, 0, 0}, {0, 0, 0, 0, 1}, {1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}};
}

}  // namespace fixtures
