"""Second-order convergence on the linear Caputo test problem u = 1 + x^3."""
# %%
import numpy as np

from fractheta import convergence_table

hs = [1 / 2**k for k in range(2, 7)]

for family, thetas in (("BT", [-1.0, 0.0, 0.2, 0.45]), ("BN", [-0.5, 0.0, 0.5, 1.0])):
    print(f"\n{family}   alpha = 0.5")
    rows = convergence_table("CaputoLinear", family, [0.5], thetas, hs)
    for i, th in enumerate(thetas):
        block = rows[i * len(hs):(i + 1) * len(hs)]
        errs = "  ".join(f"{r.error:.3e}" for r in block)
        print(f"theta={th:5.2f}  {errs}   final rate {block[-1].rate:.2f}")

# %%
# larger theta (toward the trapezoidal end) gives smaller error constants
rows = convergence_table("CaputoLinear", "BT", [0.9], [-1.0, 0.45], hs)
print("\nh = 1/64, alpha = 0.9:", rows[4].error, "vs", rows[9].error)
print("ratio", np.round(rows[4].error / rows[9].error, 2))
