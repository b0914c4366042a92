"""Repetition slotted ALOHA (CRDSA/IRSA) for comparison."""
from polar_aloha.irsa import CRDSA, DegreeDistribution, irsa_throughput

print("one user, two slots, eps=0.2:", irsa_throughput(1, 2, CRDSA, 0.2, trials=5000, seed=3))

N = 256
irsa = DegreeDistribution.parse("2:0.5,3:0.28,8:0.22")
for G in (0.3, 0.5, 0.6, 0.7, 0.8):
    M = int(G * N + 0.5)
    crdsa = irsa_throughput(M, N, CRDSA, 0.1, trials=200, seed=3)
    mixed = irsa_throughput(M, N, irsa, 0.1, trials=200, seed=3)
    print(f"G={G}: CRDSA T={crdsa:.3f}  IRSA T={mixed:.3f}")
