"""Command-line front end.

JSON results go to stdout for scripting; one-line human summaries go to
stderr.  Exit codes are uniform: 0 for yes/agree, 1 for no/none, 2 for
any error.  `gen`, `reduce` and `transpose` print file text instead of
JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Iterable, Sequence

from .hardness import parse_coverage, reduce_min_coverage, solve_two_side_deletion
from .model import (
    DOCTOR,
    Edge,
    Instance,
    Vertex,
    hospital,
    make_instance,
    ordered_edges,
    parse_instance,
    serialize_instance,
    transpose_instance,
)
from .oracle import (
    count_matchings,
    enumerate_super_stable,
    oracle_min_hospital_deletion,
    oracle_two_side_deletion,
)
from .superstable import closure, exists_super_stable, solve_min_hospital_deletion

CAP_ENV = "SUPERSTAB_ORACLE_CAP"


def generate_instance(
    n_doctors: int, n_hospitals: int, density: float, tie_prob: float, seed: object
) -> Instance:
    """Random instance: same arguments, same instance, bit for bit.

    Each doctor-hospital pair becomes an edge with probability `density`;
    every preference list is a shuffled permutation whose adjacent
    entries merge into a tie with probability `tie_prob` per boundary.
    """
    if n_doctors < 0 or n_hospitals < 0:
        raise ValueError("vertex counts must be non-negative")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must be within [0, 1]")
    if not 0.0 <= tie_prob <= 1.0:
        raise ValueError("tie probability must be within [0, 1]")
    rng = random.Random(seed)
    doctors = tuple(f"d{i}" for i in range(1, n_doctors + 1))
    hospitals = tuple(f"h{j}" for j in range(1, n_hospitals + 1))
    partners_d: dict[str, list[str]] = {d: [] for d in doctors}
    partners_h: dict[str, list[str]] = {h: [] for h in hospitals}
    for d in doctors:
        for h in hospitals:
            if rng.random() < density:
                partners_d[d].append(h)
                partners_h[h].append(d)

    def tie_up(partners: list[str]) -> list[list[str]]:
        rng.shuffle(partners)
        groups: list[list[str]] = []
        for name in partners:
            if groups and rng.random() < tie_prob:
                groups[-1].append(name)
            else:
                groups.append([name])
        return groups

    doctor_prefs = {d: tie_up(partners_d[d]) for d in doctors}
    hospital_prefs = {h: tie_up(partners_h[h]) for h in hospitals}
    return make_instance(doctors, hospitals, doctor_prefs, hospital_prefs)


def _pairs(edges: Iterable[Edge]) -> list[list[str]]:
    return [[e.doctor, e.hospital] for e in ordered_edges(edges)]


def _split_names(removed: Iterable[Vertex]) -> tuple[list[str], list[str]]:
    ds = sorted(v.name for v in removed if v.side == DOCTOR)
    hs = sorted(v.name for v in removed if v.side != DOCTOR)
    return ds, hs


def _emit(payload: dict, note: str) -> None:
    print(json.dumps(payload, indent=2))
    print(note, file=sys.stderr)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


class _Timer:
    def __init__(self) -> None:
        self.t0 = time.perf_counter()

    def ms(self) -> int:
        return int(round((time.perf_counter() - self.t0) * 1000))


def _finish_stats(stats: dict, timer: _Timer, ns: argparse.Namespace) -> dict:
    if not ns.no_timing:
        stats["elapsed_ms"] = timer.ms()
    return stats


def _oracle_caps(defaults: dict[str, int]) -> dict[str, int]:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return defaults
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError(f"{CAP_ENV} must be non-negative")
    return {name: cap for name in defaults}


def _cmd_check(ns: argparse.Namespace) -> int:
    inst = parse_instance(_read(ns.file))
    timer = _Timer()
    cert = solve_min_hospital_deletion(inst)
    ok = not cert.critical
    payload: dict = {"command": "check", "answer": "yes" if ok else "none"}
    if ok:
        payload["matching"] = _pairs(cert.matching)
    payload["stats"] = _finish_stats(
        {"iterations": cert.trace.iterations, "forbidden_size": len(cert.forbidden)},
        timer,
        ns,
    )
    _emit(payload, "super-stable matching found" if ok else "no super-stable matching")
    return 0 if ok else 1


def _cmd_solve1(ns: argparse.Namespace) -> int:
    if ns.q < 0:
        raise ValueError("--q must be non-negative")
    inst = parse_instance(_read(ns.file))
    timer = _Timer()
    cert = solve_min_hospital_deletion(inst)
    ok = len(cert.critical) <= ns.q
    payload = {
        "command": "solve1",
        "answer": "yes" if ok else "no",
        "deleted_hospitals": sorted(v.name for v in cert.critical),
        "matching": _pairs(cert.matching),
        "stats": _finish_stats(
            {
                "iterations": cert.trace.iterations,
                "forbidden_size": len(cert.forbidden),
                "min_deletions": len(cert.critical),
                "budget": ns.q,
            },
            timer,
            ns,
        ),
    }
    _emit(
        payload,
        f"minimum hospital deletions: {len(cert.critical)} "
        f"({'within' if ok else 'over'} budget {ns.q})",
    )
    return 0 if ok else 1


def _cmd_solve2(ns: argparse.Namespace) -> int:
    if ns.q1 < 0 or ns.q2 < 0:
        raise ValueError("--q1 and --q2 must be non-negative")
    inst = parse_instance(_read(ns.file))
    timer = _Timer()
    witness = solve_two_side_deletion(inst, ns.q1, ns.q2)
    payload: dict = {"command": "solve2", "answer": "yes" if witness is not None else "no"}
    if witness is not None:
        ds, hs = _split_names(witness)
        payload["deleted_doctors"] = ds
        payload["deleted_hospitals"] = hs
        matching = exists_super_stable(inst, witness)
        assert matching is not None
        payload["matching"] = _pairs(matching)
    payload["stats"] = _finish_stats({"doctor_budget": ns.q1, "hospital_budget": ns.q2}, timer, ns)
    _emit(
        payload,
        "deletion set found within budgets" if witness is not None else "no deletion set within budgets",
    )
    return 0 if witness is not None else 1


def _cmd_closure(ns: argparse.Namespace) -> int:
    inst = parse_instance(_read(ns.file))
    removed = frozenset(hospital(name) for name in ns.delete)
    timer = _Timer()
    forbidden, trace = closure(inst, removed)
    payload = {
        "command": "closure",
        "deleted_hospitals": sorted(v.name for v in removed),
        "initial_forbidden": _pairs(trace.initial_forbidden),
        "rounds": [
            {
                "round": r.index,
                "proposed": _pairs(r.proposed),
                "held": _pairs(r.held),
                "forbidden": _pairs(r.forbidden),
            }
            for r in trace.rounds
        ],
        "forbidden": _pairs(forbidden),
        "stats": _finish_stats(
            {"iterations": trace.iterations, "forbidden_size": len(forbidden)}, timer, ns
        ),
    }
    _emit(payload, f"closure fixed point after {trace.iterations} rounds")
    return 0


def _cmd_verify(ns: argparse.Namespace) -> int:
    inst = parse_instance(_read(ns.file))
    timer = _Timer()
    stats: dict = {}
    if ns.mode == "existence":
        caps = _oracle_caps({"max_edges": 20})
        solver_yes = exists_super_stable(inst) is not None
        oracle_found = enumerate_super_stable(inst, max_edges=caps["max_edges"])
        oracle_yes = bool(oracle_found)
        agree = solver_yes == oracle_yes
        stats = {
            "solver_answer": "yes" if solver_yes else "no",
            "oracle_answer": "yes" if oracle_yes else "no",
            "search_space": count_matchings(inst, max_edges=caps["max_edges"]),
        }
    elif ns.mode == "problem1":
        caps = _oracle_caps({"max_hospitals": 12})
        cert = solve_min_hospital_deletion(inst)
        oracle_min, _ = oracle_min_hospital_deletion(inst, max_hospitals=caps["max_hospitals"])
        agree = len(cert.critical) == oracle_min
        stats = {"solver_min": len(cert.critical), "oracle_min": oracle_min}
    else:
        if ns.q1 is None or ns.q2 is None:
            raise ValueError("--mode problem2 needs --q1 and --q2")
        if ns.q1 < 0 or ns.q2 < 0:
            raise ValueError("--q1 and --q2 must be non-negative")
        caps = _oracle_caps({"max_vertices": 14})
        solver_witness = solve_two_side_deletion(inst, ns.q1, ns.q2)
        oracle_witness = oracle_two_side_deletion(
            inst, ns.q1, ns.q2, max_vertices=caps["max_vertices"]
        )
        agree = (solver_witness is None) == (oracle_witness is None)
        for witness in (solver_witness, oracle_witness):
            if witness is None:
                continue
            ds, hs = _split_names(witness)
            if len(ds) > ns.q1 or len(hs) > ns.q2 or exists_super_stable(inst, witness) is None:
                agree = False
        stats = {
            "solver_answer": "yes" if solver_witness is not None else "no",
            "oracle_answer": "yes" if oracle_witness is not None else "no",
        }
    payload = {
        "command": "verify",
        "mode": ns.mode,
        "answer": "yes" if agree else "no",
        "stats": _finish_stats(stats, timer, ns),
    }
    _emit(payload, "AGREE" if agree else "DISAGREE")
    return 0 if agree else 1


def _cmd_gen(ns: argparse.Namespace) -> int:
    inst = generate_instance(ns.doctors, ns.hospitals, ns.density, ns.tie_prob, ns.seed)
    sys.stdout.write(serialize_instance(inst))
    print(
        f"generated {len(inst.doctors)} doctors, {len(inst.hospitals)} hospitals, "
        f"{len(inst.edges)} edges",
        file=sys.stderr,
    )
    return 0


def _cmd_reduce(ns: argparse.Namespace) -> int:
    red = reduce_min_coverage(parse_coverage(_read(ns.file)))
    sys.stdout.write(serialize_instance(red.instance))
    sys.stdout.write(f"# q1={red.doctor_budget} q2={red.hospital_budget}\n")
    print(
        f"reduced to {len(red.instance.doctors)} doctors, "
        f"{len(red.instance.hospitals)} hospitals; budgets q1={red.doctor_budget} "
        f"q2={red.hospital_budget}",
        file=sys.stderr,
    )
    return 0


def _cmd_transpose(ns: argparse.Namespace) -> int:
    inst = parse_instance(_read(ns.file))
    sys.stdout.write(serialize_instance(transpose_instance(inst)))
    print(
        "sides swapped; deletion problems are side-specific, so solver answers "
        "on the transpose answer the doctor-side question",
        file=sys.stderr,
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superstab",
        description="Super-stable matchings with ties: existence, deletion minimization, "
        "and brute-force cross-checks.",
    )
    parser.add_argument(
        "--no-timing",
        action="store_true",
        help="omit elapsed_ms from stats so outputs are byte-stable",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="does a super-stable matching exist?")
    p.add_argument("file")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("solve1", help="minimum hospital deletions against a budget")
    p.add_argument("file")
    p.add_argument("--q", type=int, required=True, help="hospital deletion budget")
    p.set_defaults(run=_cmd_solve1)

    p = sub.add_parser("solve2", help="two-side deletion within per-side budgets")
    p.add_argument("file")
    p.add_argument("--q1", type=int, required=True, help="doctor deletion budget")
    p.add_argument("--q2", type=int, required=True, help="hospital deletion budget")
    p.set_defaults(run=_cmd_solve2)

    p = sub.add_parser("closure", help="print the forbidding loop round by round")
    p.add_argument("file")
    p.add_argument("--delete", nargs="*", default=[], metavar="HOSPITAL")
    p.set_defaults(run=_cmd_closure)

    p = sub.add_parser("verify", help="cross-check the solver against the oracle")
    p.add_argument("file")
    p.add_argument("--mode", required=True, choices=["existence", "problem1", "problem2"])
    p.add_argument("--q1", type=int, default=None)
    p.add_argument("--q2", type=int, default=None)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("gen", help="emit a random instance deterministically")
    p.add_argument("--doctors", type=int, required=True)
    p.add_argument("--hospitals", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--tie-prob", type=float, required=True)
    p.add_argument("--seed", default="0")
    p.set_defaults(run=_cmd_gen)

    p = sub.add_parser("reduce", help="coverage data to a deletion instance")
    p.add_argument("file")
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("transpose", help="swap the doctor and hospital sides")
    p.add_argument("file")
    p.set_defaults(run=_cmd_transpose)

    # Accept --no-timing after the subcommand too.  SUPPRESS keeps an
    # omitted sub-level flag from clobbering a value set before the
    # subcommand, since absent attributes are not copied onto the
    # parent namespace.
    for p in sub.choices.values():
        p.add_argument(
            "--no-timing",
            action="store_true",
            default=argparse.SUPPRESS,
            help="omit elapsed_ms from stats so outputs are byte-stable",
        )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return ns.run(ns)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
