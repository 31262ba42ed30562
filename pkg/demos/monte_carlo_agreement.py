#!/usr/bin/env python3
"""Monte Carlo verification of the closed forms.

Every sampler's mean must land within a few standard errors of its closed
form.  The honest and forward samplers are direct pathwise simulations; the
Skorokhod model has no pathwise solution (its solution is a Wick product),
so it is estimated two independent ways that must agree with the closed form
and with each other:

  translation sampler   single-draw unbiased estimator from the Gaussian
                        shift identity (carries the dead zone)
  factorized estimator  bet probability and GBM growth factor estimated on
                        disjoint draw ranges, multiplied per the Wick
                        factorization of the expectation

Run: python demos/monte_carlo_agreement.py
"""

from insidermc import (
    RngStream,
    Trader,
    compare_closed_form,
    estimate_mean,
    skorokhod_factorized_estimate,
    validate_params,
    z_score,
)

N = 200_000
SEED = 7

CASES = [
    ("bull", (1.0, 0.00, 0.50, 1.00, 1.0)),
    ("bear", (1.0, 0.10, 0.05, 0.20, 2.0)),
    ("marginal", (1.0, 0.07, 0.07, 0.20, 1.0)),
]

print("=" * 78)
print(f"  Sampler means vs closed forms, n = {N:,} draws per estimator")
print("=" * 78)

for label, raw in CASES:
    p = validate_params(*raw)
    r = compare_closed_form(p)
    print(f"\n  --- {label}: M={p.M} rho={p.rho} mu={p.mu} sigma={p.sigma} T={p.T} ---")

    honest = estimate_mean(Trader.HONEST_OPTIMAL, p, N, seed=SEED)
    sk = estimate_mean(Trader.SKOROKHOD_UNBIASED, p, N, seed=SEED + 1)
    rs = estimate_mean(Trader.FORWARD_INSIDER, p, N, seed=SEED + 2)
    fact = skorokhod_factorized_estimate(p, RngStream(SEED + 3), N)

    rows = [
        ("honest (optimal)", honest, r.honest_optimal),
        ("skorokhod (translation)", sk, r.skorokhod),
        ("skorokhod (factorized)", fact, r.skorokhod),
        ("forward", rs, r.forward),
    ]
    print(f"  {'estimator':<26s} {'mc mean':>12s} {'stderr':>10s}"
          f" {'closed form':>12s} {'z':>7s}")
    for name, est, reference in rows:
        z = z_score(est, reference)
        tag = "" if abs(z) <= 3 else "  [!]"
        print(f"  {name:<26s} {est.mean:>12.6f} {est.stderr:>10.2e}"
              f" {reference:>12.6f} {z:>7.2f}{tag}")
    if sk.zero_fraction:
        print(f"  translation sampler dead-zone fraction: {sk.zero_fraction:.4f}"
              f"  (exactly-zero samples)")

print()
print("  |z| <= 3 everywhere means the simulations confirm the formulas at the")
print("  resolution the sample sizes allow.")
print("done.")
