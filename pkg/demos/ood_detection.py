#!/usr/bin/env python3
"""Out-of-distribution detection with epistemic uncertainty.

A bagged-tree ensemble is trained on two mildly overlapping Gaussian
blobs.  A narrow cluster far above the contested midline then draws
wildly different extrapolations from the bootstrap replicas, so its
epistemic uncertainty is high under every scoring rule, and the AUROC
against fresh in-distribution draws measures that separation.
"""

import statistics

import numpy as np

from uqscore import ScoringRule
from uqscore.benchmarks import ood_trend_run


def main():
    print("Epistemic-uncertainty AUROC, in-distribution vs far cluster")
    print("(bagged trees on two overlapping blobs; five seeds)\n")
    per_rule = {rule: [] for rule in ScoringRule}
    for seed in range(5):
        for rule, result in ood_trend_run(seed).items():
            per_rule[rule].append(result.auroc)
    print(f"  {'rule':10s} {'per-seed AUROC':38s} {'mean':>6s} {'median':>7s}")
    for rule, values in per_rule.items():
        cells = " ".join(f"{v:.3f}" for v in values)
        print(
            f"  {rule.value:10s} {cells:38s} {np.mean(values):6.3f} "
            f"{statistics.median(values):7.3f}"
        )
    med_log = statistics.median(per_rule[ScoringRule.LOG])
    med_zo = statistics.median(per_rule[ScoringRule.ZERO_ONE])
    print("\nThe log-loss measure (mutual information) separates at least as")
    print(f"well as the zero-one one here: medians {med_log:.3f} vs {med_zo:.3f}.")
    print("Zero-one epistemic uncertainty ties at exactly zero wherever the")
    print("members agree on the winning class, which blunts its ranking.")


if __name__ == "__main__":
    main()
