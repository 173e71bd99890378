"""
Steering direction from the coupling ratio
==========================================

Sweep Gamma_2/Gamma_1 and locate the peak of each steering direction.
The OPA-free curve shows how much the amplifier helps.
"""
from magnon_steering.experiments import Axis, fig3_fig4_ratio_sweep, write_csv

axis = Axis("ratio", 0.5, 2.0, 101)
grid, peaks = fig3_fig4_ratio_sweep(ratio_axis=axis, with_opa=True)
_, no_opa = fig3_fig4_ratio_sweep(ratio_axis=axis, with_opa=False)

for key in ("G12", "G21", "E12"):
    print(f"{key} peaks at ratio {peaks[key].location:.4f} with value {peaks[key].value:.4f}")

best = max(peaks["G12"].value, peaks["G21"].value)
best0 = max(no_opa["G12"].value, no_opa["G21"].value)
print(f"OPA raises peak steering by a factor {best / best0:.2f}")

# one-way steering: the asymmetry is largest away from ratio 1
gs = grid.field("GS")
print("largest asymmetry", gs.max(), "at ratio", axis.values[gs.argmax()])

write_csv("ratio_sweep.csv", grid, {"squeeze_r": 1.0, "lambda_opa": 0.49})

try:
    from magnon_steering import plots
except ImportError:
    print("matplotlib not installed, skipping plot")
else:
    plots.plot_lines("ratio_sweep.svg", grid, ["E12", "G12", "G21"], xlabel="Gamma_2/Gamma_1")
    print("wrote ratio_sweep.csv and ratio_sweep.svg")
