"""How the synthetic slot channels polarize as the frame grows."""
from polar_aloha import capacity_order, compute_metrics, polarization_fraction

m = compute_metrics(8, 0.5)
for idx in capacity_order(m):
    print(f"index {idx}: I={m.capacity(idx):.4f}  Z={m.bhattacharyya(idx):.8f}")

# wider packets just scale everything by r
m8 = compute_metrics(8, 0.5, r=8)
print("sum of I with r=8:", m8.I.sum(), "(= N r (1 - eps) =", 8 * 8 * 0.5, ")")

# share of channels stuck in the middle, gamma = 0.1
for n in (4, 6, 8, 10, 12, 16, 20):
    frac = polarization_fraction(compute_metrics(2 ** n, 0.5), 0.1)
    print(f"N=2^{n:<2d} unpolarized fraction {frac:.4f}")
