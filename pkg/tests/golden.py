"""Reference expansions as {x-power: {z multi-index: coefficient}}."""

from regsing.exactalg import FieldDesc
from regsing.frobeniusp import SectorSeries

Z1, Z1_2, Z1_3 = (1,), (2,), (3,)

EXP2 = {
    0: {(): 1},
    1: {(): 1},
    2: {Z1: 1},
    3: {Z1: 1, (): 1},
    4: {(2, 1): 1, Z1: 1},
    5: {(2, 1): 1},
    6: {(3, 1): 1, Z1_3: 1},
    7: {(3, 1): 1, (2, 1): 1, Z1_3: 1, Z1: 1, (): 1},
}

EXP3 = {
    0: {(): 1},
    1: {(): 1},
    2: {(): 2},
    3: {Z1: 2},
    4: {(): 1, Z1: 2},
    5: {Z1: 1},
    6: {Z1_2: 2},
    7: {(): 1, Z1: 2, Z1_2: 2},
    8: {(): 2, Z1_2: 1},
    9: {Z1: 2, (3, 1): 1},
}

# (S T)^j (1) for L = x D - x over F_3, j = 1..9
EXP3_ITERATES = {
    1: {(1, ()): 1},
    2: {(2, ()): 2},
    3: {(3, Z1): 2},
    4: {(4, Z1): 2, (4, ()): 1},
    5: {(5, Z1): 1},
    6: {(6, Z1_2): 2},
    7: {(7, Z1_2): 2, (7, Z1): 2, (7, ()): 1},
    8: {(8, Z1_2): 1, (8, ()): 2},
    9: {(9, (3, 1)): 1, (9, Z1): 2},
}

EXP5 = {
    0: {(): 1},
    1: {(): 1},
    2: {(): 3},
    3: {(): 1},
    4: {(): 4},
    5: {Z1: 4},
    6: {Z1: 4, (): 1},
    7: {Z1: 2, (): 2},
    8: {Z1: 4, (): 1},
    9: {Z1: 1},
    10: {Z1_2: 3},
}

# P(x, y) = sum c x^a y^b as {(a, b): c}, satisfied by the z-free parts of exp_3 and exp_5
EXP3_RELATION = {(3, 3): 1, (1, 2): 1, (0, 1): -1, (0, 0): 1}
EXP5_RELATION = {
    (10, 5): 1, (6, 4): 1, (4, 3): 1, (3, 3): -1,
    (2, 2): 2, (1, 2): 2, (0, 1): -2, (0, 0): 2,
}


def golden_series(table: dict, p: int, rho: int = 0, trunc: int | None = None) -> SectorSeries:
    F = FieldDesc(p)
    coeffs = {(k, alpha): c for k, zs in table.items() for alpha, c in zs.items()}
    return SectorSeries(F(rho), coeffs, max(table) if trunc is None else trunc)
