"""
Counting conjectures against actual counts
==========================================

Hardy-Littlewood style predictions for twin primes, primes m^2 + 1 and
primes m^2 + n^4, next to a least-squares fit through the known Mersenne
exponents.
"""
from primefrac.analysis import hl_predictor, wagstaff_fit

for family, x in [("twin", 10**4), ("twin", 10**6), ("m2p1", 10**8), ("fi", 10**8)]:
    c = hl_predictor(family, x)
    print(f"{family:5s} x={x:.0e}  predicted={c.predicted:10.1f}  actual={c.actual:6d}  ratio={c.ratio:.3f}")

fit = wagstaff_fit()
print(f"ln p_n ~ {fit.slope:.4f} n + {fit.intercept:.4f}   (e^-gamma ln 2 = {fit.theoretical_slope:.4f})")
