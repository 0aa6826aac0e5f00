"""Convolution weights of the two theta families."""
# %%
import numpy as np

from fractheta import make_scheme, weights_by_recurrence, gen_fn_eval
from fractheta.weights import direct_weights, series_oracle, relative_difference

np.set_printoptions(precision=6, suppress=True)

# theta = 0 is the fractional BDF2 in both families
for fam in ("BT", "BN"):
    w = weights_by_recurrence(make_scheme(fam, 0.5, 0.0), 6).omega
    print(fam, w)

# %%
# three independent routes to the same numbers
scheme = make_scheme("BN", -0.7, 0.3)
rec = weights_by_recurrence(scheme, 64).omega
print("recurrence vs direct sums :", relative_difference(rec, direct_weights(scheme, 64).omega))
print("recurrence vs root series :", relative_difference(rec, series_oracle(scheme, 64).omega))

# %%
# partial sums of the power series approach the closed form inside the disk
w = weights_by_recurrence(scheme, 4096).omega
xi = 0.5j
print("series  :", np.sum(w * xi ** np.arange(len(w))))
print("closed  :", gen_fn_eval(scheme, xi))

# %%
# |omega_n| n^(1 - alpha) levels off for an integration scheme
w = weights_by_recurrence(make_scheme("BT", 0.5, 0.2), 4096).omega
for n in (16, 128, 1024, 4096):
    print(n, abs(w[n]) * n ** 0.5)
