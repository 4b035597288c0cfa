# %% [markdown]
# # Signal-scale alignment and exact rate regions
#
# With weak interference (alpha < 1/2) part of each signal can be silenced
# so that the cross link drops harmlessly onto a level nobody needs. The
# resulting corner points are compared against the outer bounds in exact
# rational arithmetic.

# %%
from bursty_ic import (ChannelParams, build_corner_scheme, classify_regime, inner_corners,
                       outer_halfplanes, tightness_report, verify)
from bursty_ic.schemes import alignment_bands

p = ChannelParams(n=5, k=3, M=3, L=1)
print(alignment_bands(p))

# %%
s = build_corner_scheme(p, "r0rl", "alignment")
rep = verify(s)
print(rep.lines()[-1], "with", s.dL, "W_L symbols and", s.d0, "W_0 symbols")
print("per-n point (R_L, R_0):", s.point("r0rl"))

# %% [markdown]
# Inner corners, outer half-planes and the tightness verdict for the same
# instance. Proven planes close the region exactly when L <= M/2.

# %%
print("regime", classify_regime(3, 1, p.alpha))
print("corners", [str(c) for c in inner_corners("r0rl", 3, 1, p.n, p.k)])
for h in outer_halfplanes("r0rl", 3, 1, p.n, p.k, include_conjectured=True):
    print(" ", h)
print("verdict", tightness_report("r0rl", 3, 1, p.n, p.k).verdict.value)

# %% [markdown]
# Sweeping L at fixed alpha = 1 shows where capacity stops being settled by
# proven bounds alone.

# %%
for L in range(1, 5):
    r = tightness_report("r0rl", 4, L, 1, 1)
    print(f"L={L}  {r.verdict.value:20s} gap area {r.gap_area}  "
          f"with conjecture {r.gap_area_with_conjecture}")
