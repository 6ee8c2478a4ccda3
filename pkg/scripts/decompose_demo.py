"""Walk the shifted-copy transducer through both decompositions.

Prints the stage sizes, then each component's relation on a^0 .. a^n.
"""

import argparse
from dataclasses import dataclass

from kvalued.decompose import compose_outputs, decompose_k_valued, morphic_decompose
from kvalued.machines import MERGE_TO_B, shifted_copy, shifted_copy_source
from kvalued.oracle import eval_relation
from kvalued.textio import serialize_machine


@dataclass
class DemoConfig:
    k: int = 2
    lag: int = 1
    max_len: int = 6
    show_machines: bool = False


def show(label, m, cfg):
    print(f"{label}: {m.n_states} states, {m.n_transitions} transitions")
    if cfg.show_machines:
        print(serialize_machine(m), end="")
    for n in range(cfg.max_len + 1):
        print(f"  a^{n} -> {sorted(eval_relation(m, 'a' * n)) or '{}'}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=DemoConfig.k)
    p.add_argument("--lag", type=int, default=DemoConfig.lag)
    p.add_argument("--max-len", type=int, default=DemoConfig.max_len)
    p.add_argument("--show-machines", action="store_true")
    cfg = DemoConfig(**vars(p.parse_args()))

    res = decompose_k_valued(shifted_copy(), cfg.k, N=cfg.lag)
    print(res.metrics_text(), end="")
    for i, c in enumerate(res.components):
        show(f"component {i}", c, cfg)

    morphic = morphic_decompose(shifted_copy_source(), MERGE_TO_B, cfg.k)
    print(f"morphic decomposition with K = {morphic.K}")
    for i, c in enumerate(morphic.components):
        show(f"morphic component {i}", c, cfg)
        show("  merged through the letter map", compose_outputs(c, MERGE_TO_B), cfg)


if __name__ == "__main__":
    main()
