"""Run the certificate soundness sweep and print a per-kind table.

    python scripts/soundness_sweep.py --seed 0 --trials 2000
"""
import argparse
import time

from wovenframes.sweep import GENERATORS, soundness_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=800)
    p.add_argument("--kinds", nargs="*", choices=list(GENERATORS))
    args = p.parse_args()

    t0 = time.perf_counter()
    res = soundness_sweep(seed=args.seed, trials=args.trials, kinds=args.kinds)
    elapsed = time.perf_counter() - t0

    print(f"{'kind':<12}{'instances':>10}{'holds':>8}{'woven, not certified':>22}{'violations':>12}")
    for kind, s in res.summary().items():
        print(f"{kind:<12}{s['instances']:>10}{s['holds']:>8}{s['woven_but_failed']:>22}{s['violations']:>12}")
    slack = [r.oracle_lower - r.implied_lower for r in res.records
             if r.holds and r.implied_lower is not None]
    if slack:
        print(f"\nmin(oracle lower - implied lower) over certified instances: {min(slack):.3g}")
    print(f"upper-bound violations: {len(res.bessel_violations)}; {elapsed:.2f}s")
    for r in res.violations:
        print("VIOLATION", r)


if __name__ == "__main__":
    main()
