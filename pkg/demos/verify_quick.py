"""
Run a scaled-down inequality verification suite and print the report
====================================================================

The full reference configuration (five ensembles x dims 2-4 x three tuple
sizes x six maps x 50 trials) takes minutes; this one finishes in a few
seconds.  Two catalog entries, B16 and B22, fail on purpose: random search
finds certified counterexamples to both (see the README), and the suite
reports them instead of hiding them.
"""

from opradius.harness import EnsembleSpec, run_suite
from opradius.scalarmap import from_spec

ensembles = [
    EnsembleSpec("ginibre", 2),
    EnsembleSpec("gue_hermitian", 2),
    EnsembleSpec("nilpotent_jordan", 2),
    EnsembleSpec("psd", 3),
]
maps = [from_spec(s) for s in ("power:1", "power:2", "power:0.5", "log1p")]

report = run_suite(ensembles, maps, ns=(1, 2), trials=3, seed=42)
print(report.to_text())
print()

for rec in report.failures[:3]:
    fp = rec["fingerprint"]
    print(f"counterexample to {rec['id']} ({fp['ensemble']}, d={fp['dim']}, "
          f"map {fp['map']}): lhs {rec['lhs']:.6f} > rhs {rec['rhs']:.6f}")
