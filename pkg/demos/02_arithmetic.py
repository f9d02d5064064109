"""
Reversible arithmetic
=====================

Adder, multiplier and comparator act on basis states like their classical
counterparts and hand back clean ancillae.
"""
import itertools

from qse.qcore import (adder_fragment, apply_fragment, comparator_fragment,
                       multiplier_fragment, new_state)


def basis(n, *assignments):
    state = new_state(n)
    idx = sum(v >> k & 1 and 1 << q for reg, v in assignments for k, q in enumerate(reg))
    state.amplitudes[:] = 0
    state.amplitudes[idx] = 1
    return state


def value(state, reg):
    (idx,) = state.basis_terms()
    return sum((int(idx) >> q & 1) << k for k, q in enumerate(reg))


# 3-bit adder into a 4-bit sum register
a, b, s, anc = (0, 1, 2), (3, 4, 5), (6, 7, 8, 9), (10, 11)
add = adder_fragment(a, b, s, anc)
print(f"adder: {len(add)} gates")
print("1 + 3 =", value(apply_fragment(basis(12, (a, 1), (b, 3)), add), s))

# 2-bit multiplier; the product register is 4 bits
a, b, p, anc = (0, 1), (2, 3), (4, 5, 6, 7), (8,)
mul = multiplier_fragment(a, b, p, anc)
table = {(x, y): value(apply_fragment(basis(9, (a, x), (b, y)), mul), p)
         for x, y in itertools.product(range(4), repeat=2)}
print("products:", table)

# Comparator flags: 10 for a > b, 01 for a < b, 00 for equality
a, b, anc = (0, 1, 2), (3, 4, 5), (8, 9)
cmp = comparator_fragment(a, b, 6, 7, anc)
for x, y in [(5, 4), (2, 6), (7, 7)]:
    out = apply_fragment(basis(10, (a, x), (b, y)), cmp)
    print(f"compare {x} {y}: c1c2 = {value(out, (6,))}{value(out, (7,))}")
