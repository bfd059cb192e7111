"""Trace the ground-state energy across the admissible mass range.

Solves on a small mass grid chosen so several masses are exact sums of
smaller ones, then runs the same qualitative checks the sweep subcommand
applies: m(c) strictly decreasing and negative, subadditive over the
matched triples, and bounded by theta * m(alpha) when a mass is scaled
up by theta = c/alpha > 1.
"""
from bhgs import LandscapeParams, mass_threshold, minimize
from bhgs.cli import evaluate_sweep_flags
from bhgs.config import load_config


def main():
    params = LandscapeParams(N=5, q=3.0, mu=1.0)
    _, c0, _ = mass_threshold(params)
    grid = load_config(env={}).solve_grid()

    fracs = [0.1, 0.2, 0.3, 0.4, 0.5]
    cs = [f * c0 for f in fracs]
    ms = []
    print(" c/c0      m(c)            lambda        iters")
    for c in cs:
        st = minimize(params, grid, c)
        ms.append(st.m)
        print(f" {c / c0:4.2f}   {st.m:+.6e}   {st.lam:+.4e}   {st.iters:3d}")

    flags = evaluate_sweep_flags(cs, ms)
    print()
    print(f"strictly decreasing: {flags['monotone_decreasing']}")
    print(f"all negative:        {flags['all_negative']}")
    print(f"subadditivity violations (c_i = c_j + c_l): "
          f"{flags['subadditivity_violations'] or 'none'}")
    print(f"sub-homogeneity violations (theta > 1):     "
          f"{flags['sub_homogeneity_violations'] or 'none'}")

    # the triple 0.3 = 0.1 + 0.2 spelled out
    i, j, l = 2, 0, 1
    print()
    print(f"example triple: m({fracs[i]}c0) = {ms[i]:+.6e}  vs  "
          f"m({fracs[j]}c0) + m({fracs[l]}c0) = {ms[j] + ms[l]:+.6e}")


if __name__ == "__main__":
    main()
