# %% [markdown]
# # Where does the data go?
#
# A bit plane of a natural image is smooth in its high planes and noise-like
# in its low ones. Complexity (the count of neighbouring bits that differ
# inside an 8x8 patch, at most 112) makes that visible, and it is exactly what
# decides which patches are replaced.

# %%
import numpy as np

from bpcs_video import Coding, complexity, conjugate
from bpcs_video.analysis import complexity_profile
from bpcs_video.bitplane import checkerboard
from bpcs_video.synth import natural_frames

frame = natural_frames(count=1, height=240, width=320, seed=5)[0]

# %% [markdown]
# Complexity histograms per plane. The mean climbs towards 56, the value for
# pure noise, as we go down to the LSB.

# %%
values = np.arange(113)
for coding in Coding:
    profile = complexity_profile(frame, coding, tuple(range(8)))
    means = (profile * values).sum(axis=1) / profile.sum(axis=1)
    print(coding.value.ljust(6), " ".join(f"{m:5.1f}" for m in means), " (planes 0..7)")

# %% [markdown]
# Gray coding removes the carries that flip many binary planes at once
# (127 -> 128 changes every bit). In the profile above each gray plane behaves
# roughly like the binary plane one step higher, so a plane mask means slightly
# different things in the two codings. Counting usable patches at T=34:

# %%
for coding in Coding:
    profile = complexity_profile(frame, coding, tuple(range(8)))
    print(coding.value.ljust(6), profile[:, 34:].sum(axis=1).tolist())

# %% [markdown]
# Conjugation: XOR with the checkerboard maps complexity c to 112 - c. A
# message block that is too regular gets conjugated before it is stored, and a
# flag bit in the corner of the patch records it.

# %%
flat = np.zeros((8, 8), dtype=np.uint8)
print(complexity(flat), complexity(conjugate(flat)), complexity(checkerboard()))
