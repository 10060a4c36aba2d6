"""
The constant u = [0; 2, 3, 5, 7, 11, ...]
=========================================

Every prime below 10^4 becomes a partial quotient.  The convergents are
exact fractions, so the distance to the true value is known exactly and
the digits below are proven, not estimated.
"""
from primefrac.cfrac import ContinuedFraction, denominators, evaluate
from primefrac.primes import PrimeFamily, family_quotients
from primefrac.analysis import khinchin_profile, levy_profile

stream = family_quotients(PrimeFamily.all_primes(10**4))
cf = ContinuedFraction.from_stream(stream)
print(len(stream), "partial quotients, last", stream[-1])

res = evaluate(cf, 50, exhaust=True)
print("u =", res.truncated(50))
print("certified places:", res.certified_digits)

# Almost every real has geometric mean of quotients -> 2.685... and
# Q_n^(1/n) -> 3.275...; for u both run off to infinity.
K = khinchin_profile(stream.quotients, 1000)
L = levy_profile(denominators(cf, 1000), 1000)
for n in (10, 100, 1000):
    print(f"n={n:5d}  K(n)={K.at(n):10.2f}  Q_n^(1/n)={L.at(n):10.2f}")
