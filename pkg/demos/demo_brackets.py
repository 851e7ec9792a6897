"""Exact structure constants of sl(n, R).

Builds the off-diagonal/diagonal basis, prints the full bracket table for
n = 2, and spot-checks the classical identities with exact rationals.
"""
from slnfib.algebra import (
    AlgebraElement,
    Diag,
    OffDiag,
    basis_indices,
    bracket,
    build_structure_table,
    dims,
)


def main():
    n = 2
    print(f"sl({n}) basis: {basis_indices(n)}")
    print(f"dims(n) = (cartan, offdiag, total) = {dims(n)}")

    table = build_structure_table(n)
    print(f"\nfull bracket table for n = {n}:")
    for (a, b), val in sorted(table.items(), key=lambda kv: str(kv[0])):
        print(f"  [{a}, {b}] = {val}")

    # the transpose-pair identity in sl(3): [E_12, E_21] = E_11 - E_22 = -Y_2
    x = AlgebraElement.basis(OffDiag(1, 2), 3)
    y = AlgebraElement.basis(OffDiag(2, 1), 3)
    print(f"\n[E_12, E_21] in sl(3): {bracket(x, y)}")
    print(f"-Y_2 for comparison:   {-AlgebraElement.basis(Diag(2), 3)}")

    # chain identity: [E_12, E_23] = E_13
    z = AlgebraElement.basis(OffDiag(2, 3), 3)
    print(f"[E_12, E_23] = {bracket(x, z)}")


if __name__ == "__main__":
    main()
