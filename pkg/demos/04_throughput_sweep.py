"""A small throughput sweep, with the analytic bounds next to the Monte Carlo numbers."""
import sys

from polar_aloha import SimConfig, run_sweep
from polar_aloha.sim import max_throughput, write_csv

config = SimConfig(N=64, epsilons=[0.0, 0.02, 0.04, 0.06, 0.08, 0.1],
                   loads=[0.5, 0.6, 0.7, 0.8, 0.9], trials=500, seed=7)
results = run_sweep(config)
write_csv(results, sys.stdout)

for eps in config.epsilons:
    best = max_throughput([r for r in results if r.epsilon == eps])
    print(f"# eps={eps}: best T={best.T:.3f} at G={best.G:.3f} "
          f"(bounds {best.T_lower:.3f}..{best.T_upper:.3f})", file=sys.stderr)

# list decoding on the same frames
pscl = run_sweep(SimConfig(**{**config.__dict__, "epsilons": [0.1], "decoder": "pSCL", "L": 8}))
for a, b in zip([r for r in results if r.epsilon == 0.1], pscl):
    print(f"# G={a.G:.3f}: pSC {a.successes} vs pSCL(8) {b.successes} successes",
          file=sys.stderr)
