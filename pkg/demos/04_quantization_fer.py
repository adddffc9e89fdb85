"""
Fixed point versus floating point
=================================

A short FER sweep of PC(256,128) in floating point and at two quantization
widths. The full study (N=1024, many more frames) lives in the acceptance
suite; this one runs in well under a minute.
"""

# %%
from mkpolar import KernelOrder, QScheme, construct_code
from mkpolar.sim import StopRule, fer_crossing, run_fer_trials, to_csv

spec = construct_code(KernelOrder.of(*[2] * 8), 128, design_snr_db=2.0)
snrs = [2.0, 2.5, 3.0, 3.5, 4.0]
stop = StopRule(min_frame_errors=50, max_frames=50_000)

# %%
# Every setting sees the same messages and noise, so differences between
# curves come from the arithmetic alone.
for label, scheme in (("float", None), ("Q(5,5)", QScheme(5, 5)), ("Q(6,6)", QScheme(6, 6))):
    pts = run_fer_trials(spec, snrs, scheme, stop, seed=7)
    print(label)
    print(to_csv(pts))
    try:
        print(f"  FER 1e-2 at {fer_crossing(pts):.2f} dB")
    except ValueError:
        print("  FER stays above 1e-2 in this range")
