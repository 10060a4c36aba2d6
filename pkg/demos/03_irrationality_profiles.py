"""
How well do the convergents approximate?
========================================

delta(n) = -ln|U - P_n/Q_n| / ln Q_n is always above 2.  For the Mersenne
constant it hovers near 1 + 2^(e^-gamma); Sondow's mu_n estimate shows the
same oscillation, with spikes where a new Mersenne exponent jumps.
"""
import math

from primefrac.analysis import delta_for, sondow_mu, transcendence_statistics
from primefrac.cfrac import ContinuedFraction, denominators
from primefrac.primes import PrimeFamily, family_quotients

stream = family_quotients(PrimeFamily.mersenne(5000))
cf = ContinuedFraction.from_stream(stream)
Q = denominators(cf, len(stream))

delta = delta_for(cf, 15)
mu = sondow_mu(stream.quotients, Q, 15)
bound = transcendence_statistics("mersenne_bound", Q, 15, start=3)
print("1 + 2^(e^-gamma) =", 1 + 2 ** math.exp(-0.5772156649015329))
for n in range(3, 16):
    ok = "yes" if bound.at(n) else "no"
    print(f"n={n:2d}  delta={delta.at(n):.4f}  mu={mu.at(n):.4f}  Q_n above growth bound: {ok}")
