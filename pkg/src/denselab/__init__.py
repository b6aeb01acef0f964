"""Dense random linear codes over line networks: simulation and bound validation.

The package replays dense codes (fair-coin GF(2) recombination) over sampled
line-network traffics, measures coding delay and average coding delay, and
checks the closed-form rank / density / delay bounds against Monte Carlo and
brute-force oracles.

Modules
-------
gf2         bit-packed GF(2) vectors, matrices, rank tracking
ranklaws    structured random-matrix families, rank-deficiency bounds, oracles
traffic     traffic sampling (regular / Poisson schedules, Bernoulli losses)
densecode   session engine: code replay, density tracking, coding delay
bounds      closed-form delay and density bound evaluators
delaystats  Monte Carlo delay estimation with order-statistic intervals
cli         command-line front end
"""

__version__ = "0.1.0"
