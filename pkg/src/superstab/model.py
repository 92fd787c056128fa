"""Bipartite matching instances with tied preferences.

Doctors and hospitals rank their incident edges with positive integers
(rank 1 is best, an equal rank is a tie, staying unmatched is worse than
any ranked edge).  A matching is super-stable when no edge outside it is
weakly preferred, by both of its endpoints at once, to whatever those
endpoints currently hold.

This module owns the data model, the instance text format, induced
subgraphs, the transpose transform, choice functions, and the
super-stability predicate.  Everything is immutable and side-effect
free; solvers live in the sibling modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

DOCTOR = "D"
HOSPITAL = "H"

_SIDE_WORD = {DOCTOR: "doctor", HOSPITAL: "hospital"}


class Vertex(NamedTuple):
    side: str
    name: str

    def describe(self) -> str:
        return f"{_SIDE_WORD.get(self.side, self.side)} {self.name!r}"


class Edge(NamedTuple):
    doctor: str
    hospital: str


def doctor(name: str) -> Vertex:
    return Vertex(DOCTOR, name)


def hospital(name: str) -> Vertex:
    return Vertex(HOSPITAL, name)


def ordered_edges(edges: Iterable[Edge]) -> list[Edge]:
    """Edges in canonical order: by doctor name, then hospital name."""
    return sorted(edges)


class FormatError(ValueError):
    """Text that does not follow the instance or coverage file format."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}: " if column is None else f"line {line}, column {column}: "
        super().__init__(where + message)


# Names must survive the text format: one token, no grouping or delimiter chars.
_BANNED_NAME_CHARS = frozenset("()#:")


def _name_ok(name: object) -> bool:
    if not isinstance(name, str) or not name:
        return False
    return not any(c.isspace() or c in _BANNED_NAME_CHARS for c in name)


@dataclass(frozen=True, eq=False)
class Instance:
    """An immutable preference instance.

    `rank` maps every vertex to a mapping from each of its incident
    edges to a positive rank; edges sharing a rank are tied.  Treat all
    fields, including the nested mappings, as frozen.
    """

    doctors: tuple[str, ...]
    hospitals: tuple[str, ...]
    edges: frozenset[Edge]
    rank: Mapping[Vertex, Mapping[Edge, int]]

    def __post_init__(self) -> None:
        _validate_instance(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.doctors == other.doctors
            and self.hospitals == other.hospitals
            and self.edges == other.edges
            and self.rank == other.rank
        )

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        tables = tuple(
            (v, tuple(sorted(self.rank[v].items()))) for v in sorted(self.rank)
        )
        return hash((self.doctors, self.hospitals, self.edges, tables))

    @cached_property
    def doctor_set(self) -> frozenset[str]:
        return frozenset(self.doctors)

    @cached_property
    def hospital_set(self) -> frozenset[str]:
        return frozenset(self.hospitals)

    @cached_property
    def doctor_rank(self) -> dict[Edge, int]:
        """Each edge's rank on its doctor's list."""
        return {e: self.rank[Vertex(DOCTOR, e.doctor)][e] for e in self.edges}

    @cached_property
    def hospital_rank(self) -> dict[Edge, int]:
        """Each edge's rank on its hospital's list."""
        return {e: self.rank[Vertex(HOSPITAL, e.hospital)][e] for e in self.edges}

    @cached_property
    def _incident(self) -> dict[Vertex, frozenset[Edge]]:
        by: dict[Vertex, set[Edge]] = {v: set() for v in self.rank}
        for e in self.edges:
            by[Vertex(DOCTOR, e.doctor)].add(e)
            by[Vertex(HOSPITAL, e.hospital)].add(e)
        return {v: frozenset(s) for v, s in by.items()}

    def vertices(self) -> Iterator[Vertex]:
        for d in self.doctors:
            yield Vertex(DOCTOR, d)
        for h in self.hospitals:
            yield Vertex(HOSPITAL, h)

    def incident(self, v: Vertex) -> frozenset[Edge]:
        try:
            return self._incident[v]
        except KeyError:
            raise ValueError(f"unknown {v.describe()}") from None

    def rank_of(self, v: Vertex, e: Edge) -> int:
        return self.rank[v][e]

    def weakly_prefers(self, v: Vertex, e: Edge, f: Edge | None) -> bool:
        """True when `e` is at least as good as `f` for `v` (None = unmatched)."""
        if f is None:
            return True
        return self.rank[v][e] <= self.rank[v][f]

    def strictly_prefers(self, v: Vertex, e: Edge, f: Edge | None) -> bool:
        if f is None:
            return True
        return self.rank[v][e] < self.rank[v][f]


def _validate_instance(inst: Instance) -> None:
    for word, names in (("doctor", inst.doctors), ("hospital", inst.hospitals)):
        seen: set[str] = set()
        for n in names:
            if not _name_ok(n):
                raise ValueError(f"invalid {word} name {n!r}")
            if n in seen:
                raise ValueError(f"duplicate {word} name {n!r}")
            seen.add(n)
    dset = set(inst.doctors)
    hset = set(inst.hospitals)
    expected = {Vertex(DOCTOR, d) for d in inst.doctors} | {Vertex(HOSPITAL, h) for h in inst.hospitals}
    incident: dict[Vertex, set[Edge]] = {v: set() for v in expected}
    for e in inst.edges:
        if not isinstance(e, Edge):
            raise ValueError(f"edge {e!r} is not an Edge")
        if e.doctor not in dset or e.hospital not in hset:
            raise ValueError(f"edge {tuple(e)} has an undeclared endpoint")
        incident[Vertex(DOCTOR, e.doctor)].add(e)
        incident[Vertex(HOSPITAL, e.hospital)].add(e)
    if set(inst.rank) != expected:
        raise ValueError("preference table must cover every declared vertex exactly")
    for v, table in inst.rank.items():
        if set(table) != incident[v]:
            raise ValueError(f"{v.describe()} must rank exactly its incident edges")
        for r in table.values():
            if not isinstance(r, int) or isinstance(r, bool) or r < 1:
                raise ValueError(f"{v.describe()} has a non-positive rank {r!r}")


PrefInput = Sequence["str | Iterable[str]"]


def _normalized_groups(raw: PrefInput, owner: str) -> list[list[str]]:
    groups: list[list[str]] = []
    seen: set[str] = set()
    for item in raw:
        group = [item] if isinstance(item, str) else list(item)
        if not group:
            raise ValueError(f"{owner} has an empty tie group")
        for name in group:
            if not isinstance(name, str):
                raise ValueError(f"{owner} lists a non-string entry {name!r}")
            if name in seen:
                raise ValueError(f"{owner} lists {name!r} more than once")
            seen.add(name)
        groups.append(group)
    return groups


def make_instance(
    doctors: Iterable[str],
    hospitals: Iterable[str],
    doctor_prefs: Mapping[str, PrefInput] | None = None,
    hospital_prefs: Mapping[str, PrefInput] | None = None,
) -> Instance:
    """Build a validated instance from per-vertex preference lists.

    A preference list is a sequence whose items are either a partner
    name (a rank level of its own) or an iterable of names tied at one
    level, best level first.  Listing must be mutual: a doctor may rank
    a hospital only if that hospital ranks the doctor back.  Vertices
    absent from the mapping get an empty list.
    """
    doctors = tuple(doctors)
    hospitals = tuple(hospitals)
    doctor_prefs = dict(doctor_prefs or {})
    hospital_prefs = dict(hospital_prefs or {})
    for word, prefs, declared in (
        ("doctor", doctor_prefs, set(doctors)),
        ("hospital", hospital_prefs, set(hospitals)),
    ):
        extra = set(prefs) - declared
        if extra:
            raise ValueError(f"preferences given for undeclared {word} {sorted(extra)[0]!r}")

    d_groups = {d: _normalized_groups(doctor_prefs.get(d, ()), f"doctor {d!r}") for d in doctors}
    h_groups = {h: _normalized_groups(hospital_prefs.get(h, ()), f"hospital {h!r}") for h in hospitals}

    hset = set(hospitals)
    dset = set(doctors)
    d_lists = {(d, h) for d, gs in d_groups.items() for g in gs for h in g}
    h_lists = {(d, h) for h, gs in h_groups.items() for g in gs for d in g}
    for d, h in d_lists:
        if h not in hset:
            raise ValueError(f"doctor {d!r} lists unknown hospital {h!r}")
        if (d, h) not in h_lists:
            raise ValueError(f"doctor {d!r} lists {h!r} but hospital {h!r} does not list {d!r}")
    for d, h in h_lists:
        if d not in dset:
            raise ValueError(f"hospital {h!r} lists unknown doctor {d!r}")
        if (d, h) not in d_lists:
            raise ValueError(f"hospital {h!r} lists {d!r} but doctor {d!r} does not list {h!r}")

    edges = frozenset(Edge(d, h) for d, h in d_lists)
    rank: dict[Vertex, dict[Edge, int]] = {}
    for d in doctors:
        rank[Vertex(DOCTOR, d)] = {
            Edge(d, h): level for level, g in enumerate(d_groups[d], 1) for h in g
        }
    for h in hospitals:
        rank[Vertex(HOSPITAL, h)] = {
            Edge(d, h): level for level, g in enumerate(h_groups[h], 1) for d in g
        }
    return Instance(doctors, hospitals, edges, rank)


def _scan_entries(body: str, lineno: int, offset: int) -> list[list[tuple[str, int]]]:
    """Tokenize a preference line body into tie groups with column info."""
    groups: list[list[tuple[str, int]]] = []
    open_group: list[tuple[str, int]] | None = None
    open_col = 0
    i = 0
    while i < len(body):
        c = body[i]
        col = offset + i + 1
        if c.isspace():
            i += 1
        elif c == "(":
            if open_group is not None:
                raise FormatError("nested tie group", line=lineno, column=col)
            open_group = []
            open_col = col
            i += 1
        elif c == ")":
            if open_group is None:
                raise FormatError("unmatched ')'", line=lineno, column=col)
            if not open_group:
                raise FormatError("empty tie group", line=lineno, column=col)
            groups.append(open_group)
            open_group = None
            i += 1
        else:
            j = i
            while j < len(body) and not body[j].isspace() and body[j] not in "()":
                j += 1
            token = body[i:j]
            if not _name_ok(token):
                raise FormatError(f"invalid name {token!r}", line=lineno, column=col)
            if open_group is None:
                groups.append([(token, col)])
            else:
                open_group.append((token, col))
            i = j
    if open_group is not None:
        raise FormatError("unclosed tie group", line=lineno, column=open_col)
    return groups


def parse_instance(text: str) -> Instance:
    """Parse the instance text format.

    The format is line based: a `doctors:` line, a `hospitals:` line,
    then one `pref NAME:` line per declared vertex.  Preference entries
    read best to worst; parenthesized entries are tied at one level.
    `#` starts a comment and blank lines are skipped.  Problems raise
    FormatError with the offending line (and column where it helps).
    """
    doctors: tuple[str, ...] | None = None
    hospitals: tuple[str, ...] | None = None
    pref_lines: list[tuple[str, int, list[list[tuple[str, int]]]]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise FormatError("expected ':'", line=lineno, column=len(line.rstrip()) + 1)
        words = head.split()
        offset = len(head) + 1
        if words == ["doctors"]:
            if doctors is not None:
                raise FormatError("second 'doctors:' line", line=lineno)
            doctors = _parse_name_list(body, lineno, offset, "doctor")
        elif words == ["hospitals"]:
            if hospitals is not None:
                raise FormatError("second 'hospitals:' line", line=lineno)
            hospitals = _parse_name_list(body, lineno, offset, "hospital")
        elif len(words) == 2 and words[0] == "pref":
            if doctors is None or hospitals is None:
                raise FormatError("preference line before 'doctors:' and 'hospitals:'", line=lineno)
            name = words[1]
            if not _name_ok(name):
                raise FormatError(f"invalid name {name!r}", line=lineno)
            pref_lines.append((name, lineno, _scan_entries(body, lineno, offset)))
        else:
            raise FormatError(
                "expected 'doctors:', 'hospitals:' or 'pref NAME:'", line=lineno, column=1
            )

    if doctors is None:
        raise FormatError("missing 'doctors:' line")
    if hospitals is None:
        raise FormatError("missing 'hospitals:' line")
    both = set(doctors) & set(hospitals)
    if both:
        raise FormatError(
            f"name {sorted(both)[0]!r} appears on both sides; the text format keeps the "
            "two name spaces disjoint"
        )

    dset, hset = set(doctors), set(hospitals)
    groups_of: dict[str, list[list[tuple[str, int]]]] = {}
    line_of: dict[str, int] = {}
    for name, lineno, groups in pref_lines:
        if name not in dset and name not in hset:
            raise FormatError(f"preference line for undeclared vertex {name!r}", line=lineno)
        if name in groups_of:
            raise FormatError(
                f"second preference line for {name!r} (first on line {line_of[name]})",
                line=lineno,
            )
        groups_of[name] = groups
        line_of[name] = lineno

    for name in list(doctors) + list(hospitals):
        if name not in groups_of:
            side = "doctor" if name in dset else "hospital"
            raise FormatError(f"missing preference line for {side} {name!r}")

    entry_pos: dict[tuple[str, str], tuple[int, int]] = {}
    for owner, groups in groups_of.items():
        owner_is_doctor = owner in dset
        partners = hset if owner_is_doctor else dset
        side = "hospital" if owner_is_doctor else "doctor"
        seen: set[str] = set()
        for g in groups:
            for token, col in g:
                if token not in partners:
                    raise FormatError(
                        f"unknown {side} {token!r} in preference list of {owner!r}",
                        line=line_of[owner],
                        column=col,
                    )
                if token in seen:
                    raise FormatError(
                        f"{owner!r} lists {token!r} more than once",
                        line=line_of[owner],
                        column=col,
                    )
                seen.add(token)
                key = (owner, token) if owner_is_doctor else (token, owner)
                entry_pos[key] = (line_of[owner], col)

    d_listed = {(d, h) for d in doctors for g in groups_of[d] for h, _ in g}
    h_listed = {(d, h) for h in hospitals for g in groups_of[h] for d, _ in g}
    for d, h in sorted(d_listed - h_listed):
        lineno, col = entry_pos[(d, h)]
        raise FormatError(
            f"doctor {d!r} lists {h!r} but hospital {h!r} does not list {d!r}",
            line=lineno,
            column=col,
        )
    for d, h in sorted(h_listed - d_listed):
        lineno, col = entry_pos[(d, h)]
        raise FormatError(
            f"hospital {h!r} lists {d!r} but doctor {d!r} does not list {h!r}",
            line=lineno,
            column=col,
        )

    strip = lambda groups: [[t for t, _ in g] for g in groups]
    return make_instance(
        doctors,
        hospitals,
        {d: strip(groups_of[d]) for d in doctors},
        {h: strip(groups_of[h]) for h in hospitals},
    )


def _parse_name_list(body: str, lineno: int, offset: int, word: str) -> tuple[str, ...]:
    names: list[str] = []
    seen: set[str] = set()
    i = 0
    while i < len(body):
        if body[i].isspace():
            i += 1
            continue
        j = i
        while j < len(body) and not body[j].isspace():
            j += 1
        token = body[i:j]
        col = offset + i + 1
        if not _name_ok(token):
            raise FormatError(f"invalid {word} name {token!r}", line=lineno, column=col)
        if token in seen:
            raise FormatError(f"duplicate {word} name {token!r}", line=lineno, column=col)
        seen.add(token)
        names.append(token)
        i = j
    return tuple(names)


def _pref_groups(inst: Instance, v: Vertex) -> list[list[str]]:
    partner = (lambda e: e.hospital) if v.side == DOCTOR else (lambda e: e.doctor)
    by_rank: dict[int, list[str]] = {}
    for e in inst.incident(v):
        by_rank.setdefault(inst.rank[v][e], []).append(partner(e))
    return [sorted(by_rank[r]) for r in sorted(by_rank)]


def serialize_instance(inst: Instance) -> str:
    """Canonical text for an instance; the parser reads it back verbatim.

    Tie groups are emitted best to worst with members sorted by name, so
    equal instances serialize to identical bytes.
    """
    def name_line(label: str, names: tuple[str, ...]) -> str:
        return f"{label}:" + ("" if not names else " " + " ".join(names))

    lines = [name_line("doctors", inst.doctors), name_line("hospitals", inst.hospitals)]
    for v in inst.vertices():
        parts = [
            f"({' '.join(g)})" if len(g) > 1 else g[0] for g in _pref_groups(inst, v)
        ]
        lines.append(f"pref {v.name}:" + ("" if not parts else " " + " ".join(parts)))
    return "\n".join(lines) + "\n"


def _require_known(inst: Instance, removed: Iterable[Vertex]) -> frozenset[Vertex]:
    removed = frozenset(removed)
    for v in removed:
        if not isinstance(v, Vertex) or v.side not in _SIDE_WORD:
            raise ValueError(f"unknown vertex {v!r}")
        known = inst.doctor_set if v.side == DOCTOR else inst.hospital_set
        if v.name not in known:
            raise ValueError(f"unknown {v.describe()}")
    return removed


def induced_edges(inst: Instance, removed: Iterable[Vertex] = ()) -> frozenset[Edge]:
    """Edges of the subgraph left after deleting `removed` vertices."""
    removed = _require_known(inst, removed)
    if not removed:
        return inst.edges
    gone_d = {v.name for v in removed if v.side == DOCTOR}
    gone_h = {v.name for v in removed if v.side == HOSPITAL}
    return frozenset(
        e for e in inst.edges if e.doctor not in gone_d and e.hospital not in gone_h
    )


def induced_instance(inst: Instance, removed: Iterable[Vertex]) -> Instance:
    """The instance on the remaining vertices.

    Declaration order is preserved, edge sets shrink accordingly, and
    surviving rank values carry over unchanged.
    """
    removed = _require_known(inst, removed)
    gone_d = {v.name for v in removed if v.side == DOCTOR}
    gone_h = {v.name for v in removed if v.side == HOSPITAL}
    doctors = tuple(d for d in inst.doctors if d not in gone_d)
    hospitals = tuple(h for h in inst.hospitals if h not in gone_h)
    edges = frozenset(
        e for e in inst.edges if e.doctor not in gone_d and e.hospital not in gone_h
    )
    rank = {
        v: {e: r for e, r in inst.rank[v].items() if e in edges}
        for v in inst.rank
        if (v.name not in gone_d if v.side == DOCTOR else v.name not in gone_h)
    }
    return Instance(doctors, hospitals, edges, rank)


def transpose_instance(inst: Instance) -> Instance:
    """Swap the two sides, preserving every preference."""
    flip = lambda e: Edge(e.hospital, e.doctor)
    rank = {
        Vertex(HOSPITAL if v.side == DOCTOR else DOCTOR, v.name): {
            flip(e): r for e, r in table.items()
        }
        for v, table in inst.rank.items()
    }
    return Instance(
        doctors=inst.hospitals,
        hospitals=inst.doctors,
        edges=frozenset(flip(e) for e in inst.edges),
        rank=rank,
    )


def doctor_choice(inst: Instance, name: str, pool: Iterable[Edge]) -> frozenset[Edge]:
    """The weakly best edges for one doctor within `pool` (ties kept)."""
    if name not in inst.doctor_set:
        raise ValueError(f"unknown doctor {name!r}")
    dr = inst.doctor_rank
    best: int | None = None
    out: list[Edge] = []
    for e in pool:
        if e.doctor != name:
            continue
        r = _pool_rank(dr, e)
        if best is None or r < best:
            best, out = r, [e]
        elif r == best:
            out.append(e)
    return frozenset(out)


def hospital_choice(inst: Instance, name: str, pool: Iterable[Edge]) -> frozenset[Edge]:
    """The edge one hospital holds within `pool`: its strictly best, if any.

    Returns at most one edge; a tie at the top means the hospital holds
    nothing.
    """
    if name not in inst.hospital_set:
        raise ValueError(f"unknown hospital {name!r}")
    hr = inst.hospital_rank
    best: int | None = None
    top: Edge | None = None
    tied = False
    for e in pool:
        if e.hospital != name:
            continue
        r = _pool_rank(hr, e)
        if best is None or r < best:
            best, top, tied = r, e, False
        elif r == best:
            tied = True
    if top is None or tied:
        return frozenset()
    return frozenset((top,))


def _pool_rank(table: dict[Edge, int], e: Edge) -> int:
    try:
        return table[e]
    except KeyError:
        raise ValueError(f"edge {tuple(e)} is not an edge of the instance") from None


def all_doctor_choices(inst: Instance, pool: Iterable[Edge]) -> frozenset[Edge]:
    """Union of every doctor's weakly best edges within `pool`."""
    dr = inst.doctor_rank
    best: dict[str, int] = {}
    keep: dict[str, list[Edge]] = {}
    for e in pool:
        r = _pool_rank(dr, e)
        d = e.doctor
        b = best.get(d)
        if b is None or r < b:
            best[d] = r
            keep[d] = [e]
        elif r == b:
            keep[d].append(e)
    return frozenset(e for es in keep.values() for e in es)


def all_hospital_choices(inst: Instance, pool: Iterable[Edge]) -> frozenset[Edge]:
    """Union of every hospital's held edge within `pool` (strict bests only)."""
    hr = inst.hospital_rank
    best: dict[str, int] = {}
    top: dict[str, Edge] = {}
    tied: set[str] = set()
    for e in pool:
        r = _pool_rank(hr, e)
        h = e.hospital
        b = best.get(h)
        if b is None or r < b:
            best[h] = r
            top[h] = e
            tied.discard(h)
        elif r == b:
            tied.add(h)
    return frozenset(top[h] for h in top if h not in tied)


def doctors_with_edges(pool: Iterable[Edge]) -> frozenset[Vertex]:
    """The doctors that still have at least one edge in `pool`."""
    return frozenset(Vertex(DOCTOR, e.doctor) for e in pool)


def _assignment(
    pool: frozenset[Edge], matching: Iterable[Edge]
) -> tuple[dict[str, Edge], dict[str, Edge], frozenset[Edge]]:
    matching = frozenset(matching)
    by_d: dict[str, Edge] = {}
    by_h: dict[str, Edge] = {}
    for e in matching:
        if e not in pool:
            raise ValueError(f"matching edge {tuple(e)} is not in the induced graph")
        if e.doctor in by_d or e.hospital in by_h:
            raise ValueError("two matching edges share an endpoint")
        by_d[e.doctor] = e
        by_h[e.hospital] = e
    return by_d, by_h, matching


def blocking_edges(
    inst: Instance, removed: Iterable[Vertex], matching: Iterable[Edge]
) -> frozenset[Edge]:
    """Every edge of the graph minus `removed` that blocks `matching`.

    An edge blocks when both of its endpoints find it at least as good
    as their current assignment (being unmatched loses to anything).
    Raises ValueError when `matching` is not a matching of the induced
    graph.
    """
    pool = induced_edges(inst, removed)
    by_d, by_h, matching = _assignment(pool, matching)
    dr = inst.doctor_rank
    hr = inst.hospital_rank
    out: list[Edge] = []
    for e in pool:
        if e in matching:
            continue
        md = by_d.get(e.doctor)
        if md is not None and dr[md] < dr[e]:
            continue
        mh = by_h.get(e.hospital)
        if mh is not None and hr[mh] < hr[e]:
            continue
        out.append(e)
    return frozenset(out)


def is_super_stable(
    inst: Instance, removed: Iterable[Vertex], matching: Iterable[Edge]
) -> bool:
    """True when `matching` has no blocking edge in the graph minus `removed`."""
    return not blocking_edges(inst, removed, matching)


__all__ = [
    "DOCTOR",
    "HOSPITAL",
    "Vertex",
    "Edge",
    "doctor",
    "hospital",
    "ordered_edges",
    "FormatError",
    "Instance",
    "make_instance",
    "parse_instance",
    "serialize_instance",
    "induced_edges",
    "induced_instance",
    "transpose_instance",
    "doctor_choice",
    "hospital_choice",
    "all_doctor_choices",
    "all_hospital_choices",
    "doctors_with_edges",
    "blocking_edges",
    "is_super_stable",
]
