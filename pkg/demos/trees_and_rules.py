"""Format/degree bookkeeping without any geometry.

Derivations combine leaf FDs through one of three rule tables; structure
trees do the same for set constructions and can be flattened back to
formulas whose measured FD matches the predicted one.
"""

from sharpcells import (
    Environment,
    FDPair,
    Leaf,
    Node,
    P_SYSTEM,
    SHARP_SYSTEM,
    StructureTree,
    TLeaf,
    TNode,
    derive_fd,
    fd_of_formula,
    normalize_bound,
    omega_fd,
    parse_formula,
    to_text,
    tree_to_formula,
)

# the same union, derived under two rule tables
d = Node("union", [Leaf("A", FDPair(2, 3)), Leaf("B", FDPair(2, 5))])
print("union under P:    ", derive_fd(d, P_SYSTEM).as_tuple())
print("union under Sharp:", derive_fd(d, SHARP_SYSTEM).as_tuple())

# a structure tree over registered leaf sets
env = Environment()
for name, text in [("C", "x^2 + y^2 - 1 = 0"),
                   ("H", "x*y - 1 = 0")]:
    psi = parse_formula(text)
    env.register(name, psi, fd_of_formula(psi))

t = StructureTree(TNode("union", [TLeaf("C"), TLeaf("H")]))
predicted = omega_fd(t, env)
flattened = tree_to_formula(t, env)
print("\ntree FD:", predicted.as_tuple())
print("flattened:", to_text(flattened))
print("measured FD:", fd_of_formula(flattened).as_tuple())

# crossing with a line is the only tree operation raising the format
lifted = StructureTree(TNode("times_R_left", [TLeaf("C")]), slanted=True)
print("C x R FD:", omega_fd(lifted, env).as_tuple())

# iterating a per-step format cost C yields the normalized bound C^F(F)
print("\nnormalized bounds for C(F) = F + 1:",
      [normalize_bound(F, lambda x: x + 1) for F in range(1, 6)])
print("normalized bounds for C(F) = 2F:  ",
      [normalize_bound(F, lambda x: 2 * x) for F in range(1, 6)])
