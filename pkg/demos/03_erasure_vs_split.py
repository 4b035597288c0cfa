# %% [markdown]
# # Erasure coding is not always the right answer
#
# At alpha = 1 with M = 4 subcarriers and L = 3 interfered, an MDS code
# across subcarriers delivers R_L = (M - L) n = n. Splitting the
# subcarriers between the two users (two each, no overlap) delivers 2n.

# %%
from bursty_ic import ChannelParams, build_corner_scheme, split_scheme, verify
from bursty_ic.region import conjecture_gap, outer_region

p = ChannelParams(n=1, k=1, M=4, L=3)
for name, s in [("erasure", build_corner_scheme(p, "r0rl", "erasure-all")),
                ("split", split_scheme(p))]:
    rep = verify(s)
    print(f"{name:8s} R_L={s.normalized_rate('L')}  {rep.lines()[-1]}")

# %% [markdown]
# The split point (R_L, R_0) = (2, 0) sits outside what the proven bounds
# alone can certify as optimal. A conjectured plane cuts the outer region
# down to the inner hull.

# %%
print("proven outer:     ", outer_region("r0rl", 4, 3, 1, 1))
print("with conjecture:  ", outer_region("r0rl", 4, 3, 1, 1, include_conjectured=True))
for g in conjecture_gap("r0rl", 4, 3, 1, 1):
    print(f"vertex {g.vertex} violates {g.plane.label} by {g.margin}")
