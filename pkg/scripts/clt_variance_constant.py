"""Compare the empirical variance of sqrt(n)(phi(Z_n) - phi(Z_X)) with two constants.

For j = 1 the two coincide. For j >= 2 the Hoeffding projection of the
U-statistic gives (j / j!)^2 zeta_1, while (j! j)^2 zeta_1 is the other
normalisation; the printed ratios show which one the simulation follows.

    python3 scripts/clt_variance_constant.py --d 2 --j 2 --n 400 --reps 400
"""

import argparse

from randzono.core import ValuationSpec
from randzono.distributions import DistributionSpec, SeedSpec
from randzono.estimators import clt_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--j", type=int, default=2)
    parser.add_argument("--n", type=int, default=400)
    parser.add_argument("--reps", type=int, default=400)
    parser.add_argument("--seed", type=int, default=17)
    args = parser.parse_args()

    report = clt_experiment(
        DistributionSpec.gaussian(args.d),
        ValuationSpec.intrinsic(args.j),
        args.n,
        args.reps,
        SeedSpec(args.seed),
    )
    print(f"zeta_1 = {report.zeta1:.6g} ({report.zeta1_source})")
    print(f"empirical variance             {report.empirical_variance:.6g}")
    print(f"(j! j)^2 zeta_1                {report.predicted_variance:.6g}  ratio {report.variance_ratio:.4f}")
    ratio = report.empirical_variance / report.ustat_variance
    print(f"(j / j!)^2 zeta_1              {report.ustat_variance:.6g}  ratio {ratio:.4f}")
    print(f"KS {report.ks_statistic:.4f} against {report.ks_critical:.4f}")


if __name__ == "__main__":
    main()
