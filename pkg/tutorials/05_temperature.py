"""
Thermal robustness
==================

Follow entanglement and steering as the bath warms up, then bisect for the
temperature at which each one dies.
"""
from magnon_steering import default_spec
from magnon_steering.experiments import Axis, NoThresholdInRange, fig6_temperature_threshold, temperature_sweep

base = default_spec(2.0, 0.49)
grid = temperature_sweep(base, Axis("T_mK", 0.0, 1000.0, 11))
for t, e, g in zip(grid.axes[0].values, grid.field("E12"), grid.field("G12")):
    print(f"T = {t:6.1f} mK   E12 = {e:.4f}   G12 = {g:.4f}")

for metric in ("steering", "entanglement"):
    tc = fig6_temperature_threshold(metric=metric, r=2.0, lambda_opa=0.49)
    print(f"{metric} survives up to {tc * 1e3:.1f} mK")

# without the squeezed drive there is no steering to lose
try:
    fig6_temperature_threshold(metric="steering", r=0.0, lambda_opa=0.49)
except NoThresholdInRange as err:
    print("r = 0:", err)
