"""Starting weights and the Bagley-Torvik problem with u = x^1.1 + x^5."""
# %%
import numpy as np

from fractheta import (
    ThetaScheme, UniformGrid, apply, convolution_error, exact_riemann_liouville_monomial,
    exponent_set, solve_starting_weights, weights_by_recurrence, convergence_table,
)

# u = x^0.5 + x^3: the rough part costs the plain rule its second order
alpha, beta = 0.5, 0.5
prev = None
for n in (16, 32, 64, 128):
    grid = UniformGrid(1.0, n)
    table = weights_by_recurrence(ThetaScheme("BT", alpha, 0.0), n)
    x = grid.nodes
    u = x**beta + x**3
    exact = exact_riemann_liouville_monomial(beta, alpha, x) + exact_riemann_liouville_monomial(3, alpha, x)
    plain = convolution_error(table, u, exact, grid)
    cset = solve_starting_weights(table, exponent_set(beta, alpha))
    fixed = np.max(np.abs(apply(table, cset, u, grid).values[1:] - exact[1:]))
    rates = "" if prev is None else f"  rates {np.log2(prev[0] / plain):.2f} / {np.log2(prev[1] / fixed):.2f}"
    print(f"N={n:4d}  plain {plain:.3e}  corrected {fixed:.3e}{rates}")
    prev = (plain, fixed)

# %%
# exponent sets grow as the operator order drops
for a in (0.5, -0.5, -1.5, -2.0):
    print(a, exponent_set(1.1, a).exponents)

# %%
hs = [1 / 2**k for k in range(2, 8)]
for mode in ("none", "leading", "full"):
    rows = convergence_table("BagleyTorvik", "BT", None, [(0.0, 0.0)], hs, correction=mode)
    print(f"{mode:8s}", "  ".join(f"{r.error:.2e}" for r in rows), f" rate {rows[-1].rate:.2f}")
