"""Named identities and quasi-identities used by the property checkers."""
from __future__ import annotations

import itertools

from .terms import Identity, Meet, Var, parse_identity, parse_quasi, substitute

I = parse_identity
Q = parse_quasi

# sandwich distributivity, meet and join forms
MEET_DIST = I("x & (y | z) & x = (x & y & x) | (x & z & x)", "meet_distributive")
JOIN_DIST = I("x | (y & z) | x = (x | y | x) & (x | z | x)", "join_distributive")

# one-sided rewritings equivalent to the sandwich forms
MEET_DIST_LEFT_FORM = I("x & ((y & x) | (z & x)) = x & (y | z) & x", "meet_dist_left_form")
MEET_DIST_RIGHT_FORM = I("x & (y | z) & x = ((x & y) | (x & z)) & x", "meet_dist_right_form")
JOIN_DIST_LEFT_FORM = I("x | ((y | x) & (z | x)) = x | (y & z) | x", "join_dist_left_form")
JOIN_DIST_RIGHT_FORM = I("x | (y & z) | x = ((x | y) & (x | z)) | x", "join_dist_right_form")

# meet distributivity in handed algebras
LEFT_MEET_DIST = I("x & (y | z) = (x & y) | (x & z)", "left_meet_dist")
RIGHT_MEET_DIST = I("(y | z) & x = (y & x) | (z & x)", "right_meet_dist")

UPPER_SYM = I("x | y | (x & y) = (y & x) | y | x", "upper_symmetric_identity")
LOWER_SYM = I("x & y & (x | y) = (y | x) & y & x", "lower_symmetric_identity")
UPPER_SYM_Q = Q("x & y = y & x => x | y = y | x", "meet_commuting_implies_join_commuting")
LOWER_SYM_Q = Q("x | y = y | x => x & y = y & x", "join_commuting_implies_meet_commuting")

RECTANGULAR = I("x & y & x = x", "rectangular")
MEET_COMM = I("x & y = y & x", "meet_commutative")
JOIN_COMM = I("x | y = y | x", "join_commutative")
LEFT_HANDED = (I("x & y & x = x & y", "left_meet"), I("x | y | x = y | x", "left_join"))
RIGHT_HANDED = (I("x & y & x = y & x", "right_meet"), I("x | y | x = x | y", "right_join"))

# consequences of left-handedness
LEFT_LEMMA = (
    I("x & (y | x) = x", "left_absorb_meet"),
    I("(x & y) | x = x", "left_absorb_join"),
    I("(x | (y & x)) & x = x | (y & x)", "left_fixed_join"),
    I("(x | (y & x)) & y = y & x", "left_recover_meet"),
)
# x ≽ u premise written as x ∨ u ∨ x = x
LEFT_PREORDER = (
    Q("x | u | x = x => u & y & x = u & y", "left_preorder_meet"),
    Q("x | u | x = x => u | y | x = y | x", "left_preorder_join"),
)
# join half with x and u in the other order; already false on the 2-element chain
LEFT_PREORDER_JOIN_PRINTED = Q("x | u | x = x => x | y | u = y | u", "left_preorder_join_printed")
RIGHT_PREORDER = (
    Q("x | u | x = x => x & y & u = y & u", "right_preorder_meet"),
    Q("x | u | x = x => x | y | u = x | y", "right_preorder_join"),
)

LINEAR = I("x & ((y & x) | (z & x)) = ((x & y) | (x & z)) & x", "linear_meet")
LINEAR_DUAL = I("x | ((y | x) & (z | x)) = ((x | y) & (x | z)) | x", "linear_join")
LINEAR_LEFT = I("x & ((y & x) | (z & x)) = (x & y) | (x & z)", "linear_left")
# the literal printed right-handed reduction; see LINEAR_RIGHT_MIRROR
LINEAR_RIGHT_PRINTED = I("((x | y) & (x | z)) | x = (y & x) | (z & x)", "linear_right_printed")
LINEAR_RIGHT_MIRROR = I("((x & y) | (x & z)) & x = (y & x) | (z & x)", "linear_right")
LINEAR_LEFT_TRIPLE = I("a & ((b & a) | (c & b & a)) = (a & b) | (a & c & b)", "linear_left_triple")
LINEAR_RIGHT_TRIPLE = I("((a & b & c) | (a & b)) & a = (b & c & a) | (b & a)", "linear_right_triple")


def linear_family() -> list[Identity]:
    """The six identities obtained by feeding x ≽ y∧x∧y ≽ z∧y∧x∧y∧z into the
    sandwich meet identity in every order."""
    x, y, z = Var(0), Var(1), Var(2)
    chain = [x, Meet(Meet(y, x), y), Meet(Meet(Meet(Meet(z, y), x), y), z)]
    base = MEET_DIST
    out = []
    for perm in itertools.permutations(range(3)):
        sub = [chain[p] for p in perm]
        out.append(Identity(substitute(base.lhs, sub), substitute(base.rhs, sub),
                            ("x", "y", "z"), f"linear_family_{''.join(map(str, perm))}"))
    return out


CATEGORICAL_Q = Q("x & y = y, y & x = y, z & y & z = z "
                  "=> x & (z | y | z) & x = (x & z & x) | y | (x & z & x)", "categorical")
STRICT_Q = Q("a & b = b, b & a = b, b & c = c, c & b = c, a & d = d, d & a = d, "
             "d & c = c, c & d = c, b & d & b = b, d & b & d = d => b = d", "unique_midpoint")
NORMAL = I("x & y & z & w = x & z & y & w", "normal")

EMCC = I("x & ((y & x & y) | z | y | z | (y & x & y)) & x = x & (y | z | y) & x", "emcc")
EMCC_LEFT = I("x & (y | z | (y & x)) = x & (z | y)", "emcc_left")
EMCC_RIGHT = I("((x & y) | z | y) & x = (y | z) & x", "emcc_right")

QD_LEFT = I("x & ((y & x) | z) = x & (y | z)", "quasi_distributive_left")

CANCEL = (
    Q("x | y = x | z, x & y = x & z => y = z", "cancel_right_operands"),
    Q("x | z = y | z, x & z = y & z => x = y", "cancel_left_operands"),
)
SIMPLE_CANCEL = Q("x | z | x = y | z | y, x & z & x = y & z & y => x = y", "simply_cancellative")
