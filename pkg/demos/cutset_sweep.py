"""Sweep the additive family over small towers and tabulate bandwidth vs cut-set."""

from rackrepair.experiments import run_sweep, sweep_csv

grid = {"family": "additive", "p0": 2, "t": [4, 6], "ell": [1, 2, 3]}
print(sweep_csv(run_sweep(grid, trials=2, seed=1)), end="")
