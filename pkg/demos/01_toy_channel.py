# %% [markdown]
# # The two-subcarrier toy channel
#
# Each user owns two parallel subcarriers carrying one bit level apiece
# (n = k = 1). Exactly one subcarrier per user is hit by interference, and
# the transmitters do not know which. W_0 must be decoded only when nothing
# is interfered, W_L must survive one interfered subcarrier.

# %%
from bursty_ic import build_corner_scheme, toy_oracle, verify
from bursty_ic.region import hull, inner_region
from bursty_ic.verifier import toy_params

p = toy_params()
print(p)

# %% [markdown]
# Repeating one W_L bit on both subcarriers gives R_L = 1. Every
# exactly-one-interfered mask is checked by a rank test over GF(2).

# %%
rep = verify(build_corner_scheme(p, "r0rl", "erasure-all"))
print("\n".join(rep.lines()))

# %% [markdown]
# Exhaustive search over all linear schemes with block length up to 2
# recovers every half-integer point of the triangle 2 R_L + R_0 <= 2.

# %%
found = sorted(toy_oracle(2))
for r_l, r_0 in found:
    print(f"R_L={r_l}  R_0={r_0}")
print("hull vertices:", hull(found))
print("inner region at n=k=1:", inner_region("r0rl", 2, 1, 1, 1))
