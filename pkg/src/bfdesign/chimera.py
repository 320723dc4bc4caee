"""Chimera topology, structured chain embeddings, and logical-to-physical lowering.

Qubit id convention: in an (M, N, L) grid, cell (row, col) holds 2L qubits,
id = ((row * N) + col) * 2L + side * L + k, where side 0 is the left half
(vertical inter-cell couplers) and side 1 the right half (horizontal).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ising import IsingModel


@dataclass(frozen=True)
class ChimeraGraph:
    M: int
    N: int
    L: int = 4

    def __post_init__(self):
        if min(self.M, self.N, self.L) < 1:
            raise ValueError("M, N, L must all be >= 1")

    @property
    def num_qubits(self) -> int:
        return self.M * self.N * 2 * self.L

    def qubit(self, row: int, col: int, side: int, k: int) -> int:
        if not (0 <= row < self.M and 0 <= col < self.N and side in (0, 1) and 0 <= k < self.L):
            raise ValueError(f"qubit coordinate ({row},{col},{side},{k}) out of range")
        return ((row * self.N) + col) * 2 * self.L + side * self.L + k

    def coords(self, q: int):
        cell, r = divmod(q, 2 * self.L)
        side, k = divmod(r, self.L)
        row, col = divmod(cell, self.N)
        return row, col, side, k

    def edges(self):
        """All couplers: K_{L,L} per cell, vertical left-left, horizontal right-right."""
        out = []
        for row in range(self.M):
            for col in range(self.N):
                for k1 in range(self.L):
                    for k2 in range(self.L):
                        out.append((self.qubit(row, col, 0, k1), self.qubit(row, col, 1, k2)))
                for k in range(self.L):
                    if row + 1 < self.M:
                        out.append((self.qubit(row, col, 0, k), self.qubit(row + 1, col, 0, k)))
                    if col + 1 < self.N:
                        out.append((self.qubit(row, col, 1, k), self.qubit(row, col + 1, 1, k)))
        return out

    def has_edge(self, qa: int, qb: int) -> bool:
        if qa == qb:
            return False
        (r1, c1, s1, k1) = self.coords(qa)
        (r2, c2, s2, k2) = self.coords(qb)
        if (r1, c1) == (r2, c2):
            return s1 != s2
        if s1 != s2 or k1 != k2:
            return False
        if s1 == 0:
            return c1 == c2 and abs(r1 - r2) == 1
        return r1 == r2 and abs(c1 - c2) == 1


@dataclass(frozen=True)
class Embedding:
    """Logical spin -> chain of physical qubits, plus one physical edge per logical coupler."""

    n: int
    chains: tuple                 # tuple of tuples of qubit ids, indexed by logical spin
    coupler_sites: dict           # (i, j) with i < j -> (qa, qb)
    graph: ChimeraGraph

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(tuple(c) for c in self.chains))
        object.__setattr__(
            self,
            "coupler_sites",
            {(min(i, j), max(i, j)): tuple(site) for (i, j), site in self.coupler_sites.items()},
        )

    @property
    def num_chains(self) -> int:
        return len(self.chains)

    @property
    def num_physical_qubits(self) -> int:
        return sum(len(c) for c in self.chains)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "chains": [list(c) for c in self.chains],
            "coupler_sites": [[i, j, qa, qb] for (i, j), (qa, qb) in sorted(self.coupler_sites.items())],
            "graph": {"M": self.graph.M, "N": self.graph.N, "L": self.graph.L},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Embedding":
        g = ChimeraGraph(**d["graph"])
        return cls(
            n=d["n"],
            chains=tuple(tuple(c) for c in d["chains"]),
            coupler_sites={(i, j): (qa, qb) for i, j, qa, qb in d["coupler_sites"]},
            graph=g,
        )


@dataclass(frozen=True)
class PhysicalModel:
    """An IsingModel indexed by physical qubits, with its embedding retained for decoding."""

    model: IsingModel
    embedding: Embedding
    chain_strength: float
    chain_edges: tuple = ()

    @property
    def graph(self) -> ChimeraGraph:
        return self.embedding.graph


def chimera_graph(M: int, N: int, L: int = 4) -> ChimeraGraph:
    return ChimeraGraph(M, N, L)


def embed_bipartite(n: int, graph: Optional[ChimeraGraph] = None) -> Embedding:
    """Row/column biclique embedding for the nonlinearity model.

    Function spin 4r + k -> right-half qubit k across cell row r; ancilla
    spin 2^n + 4c + k -> left-half qubit k down cell column c. Chain length
    is 2^{n-2}; every (function, ancilla) pair meets at exactly one cell.
    """
    if n % 2 or n < 2:
        raise ValueError("bipartite embedding requires even n >= 2")
    cells = 1 << (n - 2)
    if graph is None:
        graph = ChimeraGraph(max(cells, 1), max(cells, 1), 4)
    if graph.M < cells or graph.N < cells or graph.L < 4:
        raise ValueError(f"grid too small: need {cells}x{cells} cells with L >= 4")
    size = 1 << n
    chains = []
    for x in range(size):                      # function spins: rows of right-half qubits
        r, k = divmod(x, 4)
        chains.append(tuple(graph.qubit(r, c, 1, k) for c in range(cells)))
    for a in range(size):                      # ancilla spins: columns of left-half qubits
        c, k = divmod(a, 4)
        chains.append(tuple(graph.qubit(r, c, 0, k) for r in range(cells)))
    sites = {}
    for x in range(size):
        rx, kx = divmod(x, 4)
        for a in range(size):
            ca, ka = divmod(a, 4)
            sites[(x, size + a)] = (graph.qubit(rx, ca, 1, kx), graph.qubit(rx, ca, 0, ka))
    return Embedding(n=n, chains=tuple(chains), coupler_sites=sites, graph=graph)


def embed_clique(k: int, graph: Optional[ChimeraGraph] = None,
                 row_offset: int = 0, col_offset: int = 0) -> Embedding:
    """L-shaped clique embedding for k fully coupled logical spins.

    Spin 4p + q -> left-half qubit q down cell column p plus right-half
    qubit q across cell row p, joined at the diagonal cell (p, p); chain
    length 2 * (k/4). Pair (i, j), p_i < p_j, couples at cell (p_j, p_i).
    """
    if k % 4:
        raise ValueError("clique size must be divisible by 4")
    m = k // 4
    if graph is None:
        graph = ChimeraGraph(row_offset + m, col_offset + m, 4)
    if graph.M < row_offset + m or graph.N < col_offset + m or graph.L < 4:
        raise ValueError(f"grid too small: need {m}x{m} cells at offset ({row_offset},{col_offset})")
    chains = []
    for s in range(k):
        p, q = divmod(s, 4)
        vert = tuple(graph.qubit(row_offset + r, col_offset + p, 0, q) for r in range(m))
        horiz = tuple(graph.qubit(row_offset + p, col_offset + c, 1, q) for c in range(m))
        chains.append(vert + horiz)
    sites = {}
    for i in range(k):
        pi, qi = divmod(i, 4)
        for j in range(i + 1, k):
            pj, qj = divmod(j, 4)
            if pi == pj:
                cell = (row_offset + pi, col_offset + pi)
            else:
                cell = (row_offset + pj, col_offset + pi)
            sites[(i, j)] = (graph.qubit(cell[0], cell[1], 0, qi), graph.qubit(cell[0], cell[1], 1, qj))
    return Embedding(n=k.bit_length() - 1, chains=tuple(chains), coupler_sites=sites, graph=graph)


def compose_embeddings(bipartite: Embedding, clique: Optional[Embedding]) -> Embedding:
    """Join the nonlinearity and clique embeddings into one for a combined model.

    The clique block sits directly to the right of the bipartite block, so
    each function chain's row of right-half qubits continues into its clique
    chain's row through one horizontal coupler. (A block placed below would
    leave no joining edge: right-half qubits carry no vertical couplers.)
    Function spin i's merged chain = bipartite chain i + clique chain i;
    ancilla chains and all coupler sites carry over unchanged.
    """
    if clique is None:
        return bipartite
    n = bipartite.n
    size = 1 << n
    if clique.num_chains != size:
        raise ValueError("clique part must have one chain per function spin")
    if bipartite.graph != clique.graph:
        raise ValueError("parts must live on the same graph")
    graph = bipartite.graph
    used = set()
    for c in bipartite.chains:
        used.update(c)
    overlap = [q for c in clique.chains for q in c if q in used]
    if overlap:
        raise ValueError(f"embedding regions overlap on {len(overlap)} qubits")

    chains = []
    for x in range(size):
        bip = bipartite.chains[x]
        cli = clique.chains[x]
        if not any(graph.has_edge(qa, qb) for qa in bip for qb in cli):
            raise ValueError(f"no connecting edge between the two chains of function spin {x}")
        chains.append(tuple(bip) + tuple(cli))
    chains.extend(bipartite.chains[size:])     # ancilla chains, unchanged
    sites = dict(bipartite.coupler_sites)
    for (i, j), site in clique.coupler_sites.items():
        sites[(i, j)] = site
    return Embedding(n=n, chains=tuple(chains), coupler_sites=sites, graph=graph)


def embed_combined(n: int) -> Embedding:
    """Convenience builder for the combined nonlinearity + resiliency layout."""
    cells = 1 << (n - 2)
    m = (1 << n) // 4
    graph = ChimeraGraph(max(cells, m), cells + m, 4)
    bip = embed_bipartite(n, graph)
    cli = embed_clique(1 << n, graph, row_offset=0, col_offset=cells)
    return compose_embeddings(bip, cli)


def chain_edges(chain, graph: ChimeraGraph):
    """Graph edges with both endpoints inside the chain."""
    qubits = list(chain)
    out = []
    for i, qa in enumerate(qubits):
        for qb in qubits[i + 1 :]:
            if graph.has_edge(qa, qb):
                out.append((min(qa, qb), max(qa, qb)))
    return out


def apply_embedding(logical: IsingModel, e: Embedding, chain_strength: float = -1.0) -> PhysicalModel:
    """Lower a logical model: couplers onto their sites, chains tied ferromagnetically."""
    if chain_strength >= 0:
        raise ValueError("chain strength must be negative (ferromagnetic)")
    if logical.num_spins > e.num_chains:
        raise ValueError(f"embedding covers {e.num_chains} spins, model has {logical.num_spins}")
    couplers = {}
    all_chain_edges = []
    for chain in e.chains[: logical.num_spins]:
        for edge in chain_edges(chain, e.graph):
            couplers[edge] = chain_strength
            all_chain_edges.append(edge)
    for (i, j), v in logical.couplers.items():
        site = e.coupler_sites.get((i, j))
        if site is None:
            raise ValueError(f"no coupler site for logical pair ({i},{j})")
        qa, qb = min(site), max(site)
        if not e.graph.has_edge(qa, qb):
            raise ValueError(f"coupler site ({qa},{qb}) is not a graph edge")
        couplers[(qa, qb)] = couplers.get((qa, qb), 0.0) + v
    linear = {}
    for i, h in logical.linear.items():
        chain = e.chains[i]
        for q in chain:
            linear[q] = linear.get(q, 0.0) + h / len(chain)
    model = IsingModel(
        num_spins=e.graph.num_qubits,
        linear=linear,
        couplers=couplers,
        offset=logical.offset,
    )
    return PhysicalModel(
        model=model, embedding=e, chain_strength=chain_strength, chain_edges=tuple(all_chain_edges)
    )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple

    def __bool__(self):
        return self.ok


def validate_embedding(e: Embedding, graph: Optional[ChimeraGraph] = None,
                       logical: Optional[IsingModel] = None) -> ValidationReport:
    """Check chain disjointness, chain connectivity, and coupler-site coverage."""
    graph = graph or e.graph
    problems = []
    seen = {}
    for i, chain in enumerate(e.chains):
        if not chain:
            problems.append(f"chain {i} is empty")
            continue
        for q in chain:
            if q in seen:
                problems.append(f"qubit {q} shared by chains {seen[q]} and {i}")
            seen[q] = i
            if not 0 <= q < graph.num_qubits:
                problems.append(f"qubit {q} of chain {i} outside the graph")
        # connectivity: BFS over induced edges
        members = set(chain)
        frontier = {chain[0]}
        reached = {chain[0]}
        while frontier:
            nxt = set()
            for qa in frontier:
                for qb in members - reached:
                    if graph.has_edge(qa, qb):
                        nxt.add(qb)
            reached |= nxt
            frontier = nxt
        if reached != members:
            problems.append(f"chain {i} is disconnected ({len(reached)}/{len(members)} reachable)")
    for (i, j), (qa, qb) in e.coupler_sites.items():
        if i >= len(e.chains) or j >= len(e.chains):
            problems.append(f"coupler site ({i},{j}) references a missing chain")
            continue
        ci, cj = set(e.chains[i]), set(e.chains[j])
        if not ((qa in ci and qb in cj) or (qa in cj and qb in ci)):
            problems.append(f"site ({qa},{qb}) does not connect chains {i} and {j}")
        if not graph.has_edge(qa, qb):
            problems.append(f"site ({qa},{qb}) of pair ({i},{j}) is not a graph edge")
    if logical is not None:
        for (i, j) in logical.couplers:
            if (min(i, j), max(i, j)) not in e.coupler_sites:
                problems.append(f"logical coupler ({i},{j}) has no site")
    return ValidationReport(ok=not problems, violations=tuple(problems))
