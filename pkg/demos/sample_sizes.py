# How many samples to get both error probabilities under a target?
# Compares the Renyi sample-size bound (at a fixed order, then
# optimized) with the closed-form comparison bound.

import math

from htbounds import parse_pair, sample_complexity_pensia, sample_complexity_renyi

pair = parse_pair("gaussian:2,0.05")

eps, delta = 0.01, 0.01
fixed = sample_complexity_renyi(pair, eps, delta, lam=2.0)
best = sample_complexity_renyi(pair, eps, delta)
print(f"targets eps = {eps}, delta = {delta}")
print(f"  lambda = 2      n >= {fixed.value:.4f}  (ceil {math.ceil(fixed.value)})")
print(f"  optimized       n >= {best.value:.4f}  (ceil {math.ceil(best.value)},"
      f" lambda = {best.optimizer:.4f})")

eps, delta = 0.01, 0.001
best = sample_complexity_renyi(pair, eps, delta)
pensia = sample_complexity_pensia(pair, eps, delta)
print(f"\ntargets eps = {eps}, delta = {delta}")
print(f"  optimized       n >= {best.value:.4f}  (ceil {math.ceil(best.value)})")
print(f"  comparison      n >= {pensia.value:.4f}  (ceil {math.ceil(pensia.value)},"
      f" lambda* = {pensia.optimizer:.6f})")

# The asymmetric case shows the optimized order drifting away from the
# balanced lambda = 2 point as the two targets separate.
print("\n delta      optimized n    lambda")
for exp in (1, 2, 3, 4, 6):
    r = sample_complexity_renyi(pair, 0.01, 10.0 ** -exp)
    print(f" 1e-{exp}     {r.value:<12.2f}   {r.optimizer:.4f}")
