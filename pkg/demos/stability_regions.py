"""Boundary curves 1/omega(e^{i phi}) for the Abel equation of the second kind."""
# %%
import math
import sys
from pathlib import Path

from fractheta import ThetaScheme, a_theta_check, boundary_curve, real_intercept
from fractheta.stability import a_stability_angle, max_abs_arg

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("regions")
out_dir.mkdir(exist_ok=True)

# BT: the whole boundary stays in |arg z| <= alpha pi / 2
for theta in (-1.0, 0.0, 0.2, 0.45):
    curve = boundary_curve(ThetaScheme("BT", 0.5, theta))
    print(f"BT theta={theta:5.2f}  max|arg z| = {max_abs_arg(curve):.6f}"
          f"  (alpha pi/2 = {0.25 * math.pi:.6f})  intercept {real_intercept(curve.scheme):.4f}")
    with open(out_dir / f"bt_a0.5_t{theta:g}.csv", "w") as fh:
        curve.to_csv(fh)

# %%
# BN loses the right-angle sector once alpha * theta > 1/2
for theta in (0.5, 0.75, 0.9):
    s = ThetaScheme("BN", 2 / 3, theta)
    verdict = a_theta_check(boundary_curve(s), math.pi / 2)
    print(f"BN alpha=2/3 theta={theta}  intercept {real_intercept(s):8.4f}  A(pi/2): {bool(verdict)}")

# %%
s = ThetaScheme("BT", 0.25, -10.0)
print("A-stable sector check:", bool(a_theta_check(boundary_curve(s), a_stability_angle(0.25))))
