"""Survey covering sizes on seeded random machines.

Prints one tab-separated line per machine: kind, source states, parameter,
covering states, and the size bound where one applies.
"""

import argparse
import random
from dataclasses import dataclass

from kvalued.core import trim
from kvalued.lagsep import lag_sep_covering, select_psi, useful_state_bound_log2
from kvalued.machines import random_nautomaton, random_transducer
from kvalued.multiskim import multi_skim, size_bound


@dataclass
class SurveyConfig:
    seed: int = 0
    samples: int = 20
    max_states: int = 4
    max_k: int = 4
    max_lag: int = 3


def survey(cfg: SurveyConfig):
    rng = random.Random(cfg.seed)
    for _ in range(cfg.samples):
        n, k = rng.randint(1, cfg.max_states), rng.randint(1, cfg.max_k)
        a = random_nautomaton(rng, n, "ab", max_mult=rng.randint(1, 3))
        yield ("skim", n, k, multi_skim(a, k).machine.n_states, size_bound(n, k))
    for _ in range(cfg.samples):
        n, N = rng.randint(1, min(cfg.max_states, 3)), rng.randint(0, cfg.max_lag)
        t = random_transducer(rng, n, "ab", "bc")
        res = lag_sep_covering(t, N)
        useful = trim(select_psi(res)[0])[0].n_states
        yield ("lagsep", n, N, res.machine.n_states, useful,
               f"2^{useful_state_bound_log2(res.params, 2)}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(SurveyConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=value)
    cfg = SurveyConfig(**vars(p.parse_args()))
    for row in survey(cfg):
        print("\t".join(map(str, row)))


if __name__ == "__main__":
    main()
