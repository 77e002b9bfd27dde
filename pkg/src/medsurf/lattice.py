"""Rotated planar surface-code layout.

Data qubits sit on an odd-distance d x d grid, index r*d + c. Plaquette
centres sit on the dual grid at (r + 0.5, c + 0.5) for r, c in -1..d-1;
a centre hosts a Z check when r + c is even, X otherwise. Interior
centres always host a check; on the top and bottom rows only X checks
survive, on the left and right columns only Z checks, and the four
corners host none. This yields (d^2 - 1) / 2 checks of each type.

Each plaquette's data slots follow the check-circuit convention: slots
0,1 form half A (first ancilla spin) and slots 2,3 half B, with stages
(0,2) then (1,3). The corner order depends on the check type: X
plaquettes use NW, NE, SW, SE (horizontal half pairs) while Z
plaquettes use NW, SW, NE, SE (vertical half pairs). An ancilla fault
inside a half spreads a correlated two-qubit error across that half's
data pair, so each pair is oriented perpendicular to the logical
operator its error type could build: hook Z pairs run vertically,
hook X pairs horizontally, and neither shortens a logical chain.

Checks of one type are scheduled in four colour groups,
colour = (r mod 2, c mod 2) of the centre, so neighbouring plaquettes
never run simultaneously.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


# slot -> (dr, dc) offset from the centre's (r, c) corner coordinate,
# per check type (see the hook-orientation note in the module docstring)
_SLOT_OFFSETS = {
    "X": ((0, 0), (0, 1), (1, 0), (1, 1)),
    "Z": ((0, 0), (1, 0), (0, 1), (1, 1)),
}
COLOUR_ORDER = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class Plaquette:
    index: int
    basis: str  # "X" or "Z"
    row: int  # centre at (row + 0.5, col + 0.5)
    col: int
    slots: tuple  # data-qubit index per slot, -1 when absent
    colour: tuple

    @property
    def present(self) -> tuple:
        return tuple(s for s in range(4) if self.slots[s] >= 0)

    @property
    def data_qubits(self) -> tuple:
        return tuple(q for q in self.slots if q >= 0)


@dataclass(frozen=True)
class Lattice:
    d: int
    plaquettes: tuple
    logical_x: tuple  # data-qubit support of the logical X operator
    logical_z: tuple

    @property
    def n_data(self) -> int:
        return self.d * self.d

    def checks(self, basis: str) -> tuple:
        return tuple(p for p in self.plaquettes if p.basis == basis)

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": self.d,
                "logical_x": list(self.logical_x),
                "logical_z": list(self.logical_z),
                "plaquettes": [
                    {
                        "index": p.index,
                        "basis": p.basis,
                        "row": p.row,
                        "col": p.col,
                        "slots": list(p.slots),
                        "colour": list(p.colour),
                    }
                    for p in self.plaquettes
                ],
            },
            indent=1,
        )


def build_lattice(d: int) -> Lattice:
    if d < 3 or d % 2 == 0:
        raise ValueError("distance must be odd and at least 3")
    plaquettes = []
    for r in range(-1, d):
        for c in range(-1, d):
            basis = "Z" if (r + c) % 2 == 0 else "X"
            if r in (-1, d - 1) and basis != "X":
                continue
            if c in (-1, d - 1) and basis != "Z":
                continue
            if r in (-1, d - 1) and c in (-1, d - 1):
                continue
            slots = []
            for dr, dc in _SLOT_OFFSETS[basis]:
                rr, cc = r + dr, c + dc
                slots.append(rr * d + cc if 0 <= rr < d and 0 <= cc < d else -1)
            plaquettes.append(
                Plaquette(len(plaquettes), basis, r, c, tuple(slots), (r % 2, c % 2))
            )
    logical_z = tuple(range(d))  # top row, crosses every X-type column path
    logical_x = tuple(c * d for c in range(d))  # left column
    return Lattice(d, tuple(plaquettes), logical_x, logical_z)


def partition_plaquettes(lattice: Lattice, basis: str) -> list:
    """The four colour groups of one check type, in schedule order."""
    groups = []
    for colour in COLOUR_ORDER:
        groups.append([p for p in lattice.checks(basis) if p.colour == colour])
    return groups


def stabiliser_masks(lattice: Lattice, basis: str) -> list:
    """Data-qubit bitmask of each check's support, in plaquette order."""
    masks = []
    for p in lattice.checks(basis):
        m = 0
        for q in p.data_qubits:
            m |= 1 << q
        masks.append(m)
    return masks


def _adjacency(checks: list) -> dict:
    """Plaquette pairs of one type sharing a data qubit."""
    by_qubit = {}
    for i, p in enumerate(checks):
        for q in p.data_qubits:
            by_qubit.setdefault(q, []).append(i)
    adj = {i: set() for i in range(len(checks))}
    for members in by_qubit.values():
        for i in members:
            for j in members:
                if i != j:
                    adj[i].add(j)
    return adj


def boundary_checks(checks: list, n_data: int) -> set:
    """Checks owning a data qubit seen by no other check of the type.

    A single error on such a qubit fires only that one check, so its
    matching graph needs an edge to the boundary there.
    """
    count = [0] * n_data
    for p in checks:
        for q in p.data_qubits:
            count[q] += 1
    out = set()
    for i, p in enumerate(checks):
        if any(count[q] == 1 for q in p.data_qubits):
            out.add(i)
    return out


def spatial_distances(lattice: Lattice, basis: str):
    """BFS distances between same-type checks plus hop counts to boundary.

    Returns (dist, bdist) with dist[i][j] the plaquette-graph hop count
    and bdist[i] the hops from check i to the nearest boundary exit
    (0 when the check itself touches the boundary).
    """
    checks = list(lattice.checks(basis))
    adj = _adjacency(checks)
    n = len(checks)
    dist = [[0] * n for _ in range(n)]
    for s in range(n):
        seen = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in seen:
                        seen[v] = seen[u] + 1
                        nxt.append(v)
            frontier = nxt
        for j, dd in seen.items():
            dist[s][j] = dd
    boundary = boundary_checks(checks, lattice.n_data)
    bdist = [min(dist[i][b] for b in boundary) for i in range(n)]
    return dist, bdist


def boundary_error_masks(lattice: Lattice, basis: str) -> list:
    """For each check, a single-qubit error mask realising its boundary exit.

    Only meaningful for checks with bdist 0; used to turn a matched
    event-to-boundary edge into a concrete correction.
    """
    checks = list(lattice.checks(basis))
    count = [0] * lattice.n_data
    for p in checks:
        for q in p.data_qubits:
            count[q] += 1
    masks = []
    for p in checks:
        solo = [q for q in p.data_qubits if count[q] == 1]
        masks.append(1 << solo[0] if solo else 0)
    return masks


def path_masks(lattice: Lattice, basis: str):
    """Correction masks between all same-type check pairs and to boundary.

    mask[i][j] is a data-qubit bitmask whose error pattern fires exactly
    checks i and j; bmask[i] fires exactly check i. Built by walking BFS
    parent chains and picking one shared data qubit per hop.
    """
    checks = list(lattice.checks(basis))
    n = len(checks)
    shared = {}
    by_qubit = {}
    for i, p in enumerate(checks):
        for q in p.data_qubits:
            by_qubit.setdefault(q, []).append(i)
    for q, members in by_qubit.items():
        for i in members:
            for j in members:
                if i != j and (i, j) not in shared:
                    shared[(i, j)] = q
    adj = _adjacency(checks)
    mask = [[0] * n for _ in range(n)]
    for s in range(n):
        parent = {s: None}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
            frontier = nxt
        for t in parent:
            m, u = 0, t
            while parent[u] is not None:
                m ^= 1 << shared[(parent[u], u)]
                u = parent[u]
            mask[s][t] = m
    dist, bdist = spatial_distances(lattice, basis)
    bexit = boundary_error_masks(lattice, basis)
    bmask = []
    for i in range(n):
        b = min(range(n), key=lambda j: dist[i][j] if bexit[j] else 10**9)
        bmask.append(mask[i][b] ^ bexit[b])
    return mask, bmask
