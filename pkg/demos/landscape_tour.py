"""Walk through the constrained energy landscape for one parameter set.

The story: on the slice of fields with fixed mass c, the energy is bounded
below by bend * f(c, bend), where f packs both nonlinear terms into scalar
functions of the bend norm.  The profile rho -> f(c, rho) has a single
interior maximum rho_c with a closed form, its peak value decays like
1/2 - M c^(4/N), and the peak crosses zero exactly at the mass threshold
c0 = (2M)^(-N/4).  Below c0 a potential well opens between rho = 0 and the
positive region around rho_c; ground states live at its bottom.
"""
import numpy as np

from bhgs import (
    LandscapeParams,
    derive_exponents,
    f_landscape,
    mass_threshold,
    rho_star,
)


def main():
    params = LandscapeParams(N=5, q=3.0, mu=1.0)
    ex = derive_exponents(params)
    M, c0, rho0 = mass_threshold(params)

    print(f"problem: N={params.N}, q={params.q}, mu={params.mu}, "
          f"critical power {ex.p_crit}")
    print(f"exponents: alpha0={ex.alpha0}, alpha1={ex.alpha1}, "
          f"alpha2={ex.alpha2}, beta={ex.beta}, gamma_q={ex.gamma_q}")
    print(f"threshold data: M={M:.12g}  c0={c0:.12g}  rho0={rho0:.12g}")
    print()

    print("peak location scaling: rho_c(2c)/rho_c(c) is the same for every c")
    for c in (0.1, 0.5, 2.0):
        ratio = rho_star(params, 2.0 * c) / rho_star(params, c)
        print(f"  c={c:<4}  ratio={ratio:.15f}")
    expected = 2.0 ** (ex.alpha1 / (ex.alpha2 - ex.alpha0))
    print(f"  closed form 2^(alpha1/(alpha2-alpha0)) = {expected:.15f}")
    print()

    print("peak value against the identity f(c, rho_c) = 1/2 - M c^(4/N):")
    for c in (0.2 * c0, 0.6 * c0, c0, 1.4 * c0):
        peak = f_landscape(params, c, rho_star(params, c))
        ident = 0.5 - M * c ** (4.0 / params.N)
        print(f"  c/c0={c / c0:>4.1f}  f(c,rho_c)={peak:+.6e}  "
              f"identity={ident:+.6e}")
    print()

    print(f"profile of f at c = c0/2 (well, positive bump, critical tail):")
    c = 0.5 * c0
    for rho in np.exp(np.linspace(np.log(rho0 / 100), np.log(rho0 * 10), 12)):
        bar = "#" * max(0, int(40 * (f_landscape(params, c, rho) + 0.1)))
        print(f"  rho={rho:9.4f}  f={f_landscape(params, c, rho):+.4f}  {bar}")


if __name__ == "__main__":
    main()
