"""Classification on top of the posterior, and what a good prior buys.

Thresholding the posterior mean at 0.5 gives a classifier whose risk
approaches the Bayes optimum. With few observations, a prior whose mean
matches the true function cuts the excess risk; a near-zero prior reduces to
a plain neighborhood majority vote. Asymptotically all variants coincide.

Run:  python demos/classification_priors.py
"""

from smoothbeta import run_classification, synth_1d
from smoothbeta.datafiles import write_excess_csv

f = synth_1d()
t_grid = [30, 100, 300, 1000, 3000]
modes = [
    ("none", "majority vote (no prior)"),
    ("uniform", "uniform prior Beta(1,1)"),
    ("informative", "informative prior, mean = true function"),
]

print("mean excess risk over the optimal classifier (20 replications)")
print(f"{'prior':>40} | " + " | ".join(f"t={t}" for t in t_grid))
for mode, label in modes:
    excess = run_classification(f, t_grid, reps=20, prior_mode=mode, v_frac=0.25, seed=5)
    print(f"{label:>40} | " + " | ".join(f"{e:7.4f}" for e in excess))
    write_excess_csv(f"excess_risk_{mode}.csv", t_grid, excess)

print("\nthe informative prior dominates in the low-data columns and the gap closes as t grows")
