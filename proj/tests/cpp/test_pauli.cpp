#include <doctest.h>

#include "latticeweave/pauli.hpp"

using namespace latticeweave;

TEST_CASE("single-site products follow the pauli algebra") {
    auto X = PauliString::single(0, Pauli::X);
    auto Y = PauliString::single(0, Pauli::Y);
    auto Z = PauliString::single(0, Pauli::Z);

    CHECK((X * Y).at(0) == Pauli::Z);
    CHECK((X * Y).phase_exp == 1);  // i
    CHECK((Y * X).phase_exp == 3);  // -i
    CHECK((Y * Z).at(0) == Pauli::X);
    CHECK((Y * Z).phase_exp == 1);
    CHECK((Z * X).at(0) == Pauli::Y);
    CHECK((Z * X).phase_exp == 1);
    CHECK((X * Z).phase_exp == 3);
    CHECK((X * X).is_identity());
    CHECK((X * X).phase_exp == 0);
}

TEST_CASE("multi-site phases accumulate") {
    PauliString a = PauliString::single(0, Pauli::X);
    a.set(1, Pauli::Z);
    PauliString b = PauliString::single(0, Pauli::Z);
    b.set(1, Pauli::X);
    PauliString p = a * b;
    // (X0 Z1)(Z0 X1) = (-iY0)(iY1) = Y0 Y1
    CHECK(p.phase_exp == 0);
    CHECK(p.at(0) == Pauli::Y);
    CHECK(p.at(1) == Pauli::Y);
}

TEST_CASE("commutation is the symplectic overlap") {
    auto X0 = PauliString::single(0, Pauli::X);
    auto Z0 = PauliString::single(0, Pauli::Z);
    auto Z1 = PauliString::single(1, Pauli::Z);
    CHECK(!X0.commutes_with(Z0));
    CHECK(X0.commutes_with(Z1));
    PauliString xx = X0;
    xx.set(1, Pauli::X);
    PauliString zz = Z0;
    zz.set(1, Pauli::Z);
    CHECK(xx.commutes_with(zz));
}

TEST_CASE("hermiticity, negation and identity handling") {
    auto X = PauliString::single(0, Pauli::X);
    CHECK(X.is_hermitian());
    X.negate();
    CHECK(X.phase_exp == 2);
    CHECK(X.is_hermitian());
    auto iprod = PauliString::single(0, Pauli::X) * PauliString::single(0, Pauli::Y);
    CHECK(!iprod.is_hermitian());
    PauliString id;
    CHECK(id.is_identity());
    CHECK((id * X) == X);
    X.set(0, Pauli::I);
    CHECK(X.is_identity());
}

TEST_CASE("string form carries sign then factors") {
    PauliString p = PauliString::single(3, Pauli::X);
    p.set(5, Pauli::Z);
    CHECK(p.str() == "+X3 Z5");
    p.negate();
    CHECK(p.str() == "-X3 Z5");
    CHECK(PauliString::identity().str() == "+I");
}
