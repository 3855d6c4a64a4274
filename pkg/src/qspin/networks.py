"""Network data model (trivalent, strand, tetrahedron), the Penrose /
chromatic state-sum oracle, and the classical gamma-matrix oracle.

Trivalent networks are stored with rotation systems (cyclic order of
edge-ends at each vertex), which determines the medial strand network:
one antisymmetrizer rectangle per edge, with the strand lines between
consecutive edge-ends at a vertex given by the internal counts (r, s, t)
of the admissible triple there.

The chromatic evaluation is the state sum  sum_S eps(S) delta^{|S|}  over
assignments of a permutation to each rectangle, where eps(S) is the parity
(-1)^{inversions} over all rectangles and |S| is the number of closed
loops.  Raw uses the bare sum; ProjectorNormalized divides by the product
of (side sum)! over rectangles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import permutations
from math import factorial

from .errors import (
    ConstraintViolated,
    InadmissibleLabel,
    StateSpaceTooLarge,
    UnsupportedSize,
)
from .recoupling import AdmissibleTriple

MAX_TOTAL_LINES = 14
MAX_STATES = 10**6


# --------------------------------------------------------------------------
# Delta polynomials.


@dataclass(frozen=True)
class DeltaPoly:
    """A polynomial in the loop variable delta with exact coefficients."""

    coeffs: tuple  # sorted tuple of (degree, Fraction), descending degree

    @staticmethod
    def from_dict(d: dict) -> "DeltaPoly":
        items = tuple(
            sorted(((k, Fraction(v)) for k, v in d.items() if v), reverse=True)
        )
        return DeltaPoly(items)

    def as_dict(self) -> dict:
        return {k: v for k, v in self.coeffs}

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        return sum((c * x**d for d, c in self.coeffs), Fraction(0))

    def scale(self, c) -> "DeltaPoly":
        c = Fraction(c)
        return DeltaPoly.from_dict({d: v * c for d, v in self.coeffs})

    def __mul__(self, other: "DeltaPoly") -> "DeltaPoly":
        out: dict[int, Fraction] = {}
        for d1, c1 in self.coeffs:
            for d2, c2 in other.coeffs:
                out[d1 + d2] = out.get(d1 + d2, Fraction(0)) + c1 * c2
        return DeltaPoly.from_dict(out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs:
            body = f"{abs(c)}" if d == 0 else (
                ("" if abs(c) == 1 else f"{abs(c)}*")
                + ("delta" if d == 1 else f"delta^{d}")
            )
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    @staticmethod
    def one() -> "DeltaPoly":
        return DeltaPoly.from_dict({0: Fraction(1)})


# --------------------------------------------------------------------------
# Labelled trivalent networks.


@dataclass
class LabelledNetwork:
    """Trivalent network with a rotation system.

    edges: list of (v0, v1, label); edge-ends are (edge_index, side) with
    side 0 at v0 and side 1 at v1.  rotation[v] lists the incident
    edge-ends in cyclic (counterclockwise) order.  free_loops are closed
    labelled circles disjoint from the graph.
    """

    vertices: list
    edges: list
    rotation: dict
    free_loops: list = dc_field(default_factory=list)

    def validate(self) -> None:
        ends_at: dict = {v: [] for v in self.vertices}
        for ei, (v0, v1, label) in enumerate(self.edges):
            if label < 0:
                raise InadmissibleLabel(f"edge {ei} has negative label")
            ends_at[v0].append((ei, 0))
            ends_at[v1].append((ei, 1))
        for v in self.vertices:
            rot = self.rotation.get(v, [])
            if len(rot) != 3 or sorted(rot) != sorted(ends_at[v]):
                raise InadmissibleLabel(
                    f"vertex {v!r} is not trivalent or rotation is inconsistent"
                )
            a, b, c = (self.edges[e][2] for e, _ in rot)
            AdmissibleTriple(a, b, c)  # raises InadmissibleTriple if bad
        for a in self.free_loops:
            if a < 0:
                raise InadmissibleLabel("free loop has negative label")

    def end_label(self, end) -> int:
        return self.edges[end[0]][2]

    def to_json(self) -> str:
        return json.dumps(
            {
                "vertices": list(self.vertices),
                "edges": [
                    {"ends": [v0, v1], "label": label}
                    for v0, v1, label in self.edges
                ],
                "rotation": {
                    str(v): [[e, s] for e, s in rot]
                    for v, rot in self.rotation.items()
                },
                "free_loops": list(self.free_loops),
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "LabelledNetwork":
        doc = json.loads(text)
        vertices = doc["vertices"]
        by_str = {str(v): v for v in vertices}
        net = LabelledNetwork(
            vertices=vertices,
            edges=[(e["ends"][0], e["ends"][1], e["label"]) for e in doc["edges"]],
            rotation={
                by_str[v]: [tuple(end) for end in rot]
                for v, rot in doc.get("rotation", {}).items()
            },
            free_loops=list(doc.get("free_loops", [])),
        )
        net.validate()
        return net


def theta_network(a: int, b: int, c: int) -> LabelledNetwork:
    """Two vertices joined by three edges labelled a, b, c."""
    net = LabelledNetwork(
        vertices=["u", "v"],
        edges=[("u", "v", a), ("u", "v", b), ("u", "v", c)],
        rotation={
            "u": [(0, 0), (1, 0), (2, 0)],
            "v": [(2, 1), (1, 1), (0, 1)],
        },
    )
    net.validate()
    return net


def tetrahedron_network(labels=None) -> LabelledNetwork:
    """K4 with a planar rotation system (outer triangle 1,2,3; vertex 4
    inside).  ``labels`` maps the edge order
    (12, 13, 14, 23, 24, 34) to labels; default all 2."""
    if labels is None:
        labels = [2] * 6
    pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    edges = [(v0, v1, l) for (v0, v1), l in zip(pairs, labels)]
    end = {}
    for ei, (v0, v1, _) in enumerate(edges):
        end[(ei, v0)] = (ei, 0)
        end[(ei, v1)] = (ei, 1)
    rotation = {
        1: [end[(0, 1)], end[(2, 1)], end[(1, 1)]],
        2: [end[(3, 2)], end[(4, 2)], end[(0, 2)]],
        3: [end[(1, 3)], end[(5, 3)], end[(3, 3)]],
        4: [end[(2, 4)], end[(4, 4)], end[(5, 4)]],
    }
    net = LabelledNetwork(vertices=[1, 2, 3, 4], edges=edges, rotation=rotation)
    net.validate()
    return net


def unknot(a: int) -> LabelledNetwork:
    """A free circle labelled a (no vertices)."""
    net = LabelledNetwork(vertices=[], edges=[], rotation={}, free_loops=[a])
    net.validate()
    return net


def delete_zero_edge(net: LabelledNetwork, ei: int) -> LabelledNetwork:
    """Remove a 0-labelled edge and smooth the two freed 2-valent vertices.

    At each endpoint the two remaining edge-ends are concatenated; if the
    smoothing closes a circle it becomes a free loop.
    """
    if net.edges[ei][2] != 0:
        raise InadmissibleLabel("edge is not labelled 0")
    v0, v1, _ = net.edges[ei]

    # Collect, at each endpoint of ei, the other two edge-ends to splice.
    splices = []
    for v in {v0, v1}:
        rot = net.rotation[v]
        rest = [end for end in rot if end[0] != ei]
        if len(rest) != 2:
            raise InadmissibleLabel("0-edge endpoints must be distinct simple")
        splices.append(tuple(rest))

    # Union-find over edge-ends to trace the concatenated strands.
    # Each surviving edge is an arc between its two ends; splices glue ends.
    survive = [k for k in range(len(net.edges)) if k != ei]
    partner = {}
    for a, b in splices:
        partner[a] = b
        partner[b] = a

    def other_end(end):
        return (end[0], 1 - end[1])

    new_edges = []
    new_loops = list(net.free_loops)
    seen = set()
    endmap = {}  # old edge-end -> (new edge index, side) for surviving chains
    for k in survive:
        for side in (0, 1):
            start = (k, side)
            if start in seen or start in partner:
                continue
            # walk the chain from a true endpoint
            chain = []
            cur = start
            while True:
                seen.add(cur)
                chain.append(cur)
                nxt = other_end(cur)
                seen.add(nxt)
                chain.append(nxt)
                if nxt in partner:
                    cur = partner[nxt]
                else:
                    break
            label = net.edges[chain[0][0]][2]
            for e2, _ in chain:
                if net.edges[e2][2] != label:
                    raise InadmissibleLabel("spliced edges carry unequal labels")
            va = _end_vertex(net, chain[0])
            vb = _end_vertex(net, chain[-1])
            ni = len(new_edges)
            new_edges.append((va, vb, label))
            endmap[chain[0]] = (ni, 0)
            endmap[chain[-1]] = (ni, 1)
    # closed chains (circles)
    for k in survive:
        for side in (0, 1):
            start = (k, side)
            if start in seen:
                continue
            cur = start
            label = net.edges[k][2]
            while True:
                seen.add(cur)
                nxt = other_end(cur)
                seen.add(nxt)
                cur = partner[nxt]
                if cur == start:
                    break
            new_loops.append(label)

    new_vertices = [v for v in net.vertices if v not in (v0, v1)]
    new_rot = {}
    for v in new_vertices:
        new_rot[v] = [endmap[end] for end in net.rotation[v]]
    out = LabelledNetwork(
        vertices=new_vertices,
        edges=new_edges,
        rotation=new_rot,
        free_loops=new_loops,
    )
    out.validate()
    return out


def _end_vertex(net: LabelledNetwork, end):
    ei, side = end
    return net.edges[ei][side]


# --------------------------------------------------------------------------
# Strand networks.


@dataclass
class StrandNetwork:
    """One antisymmetrizer rectangle per element of ``rect_degree``; lines
    enter side 0 and leave side 1.  ``link`` is the ambient involution on
    line endpoints (rect, side, port) describing how strands connect the
    rectangles.  ``free_loops`` are labelled circles with no rectangle
    (a labelled-a circle is a cable of a parallel lines, value delta^a).
    """

    rect_degree: dict
    link: dict
    free_loops: list = dc_field(default_factory=list)

    def validate(self) -> None:
        expected = set()
        for r, d in self.rect_degree.items():
            if d < 0:
                raise InadmissibleLabel("negative rectangle degree")
            for side in (0, 1):
                for p in range(d):
                    expected.add((r, side, p))
        if set(self.link) != expected:
            raise ConstraintViolated("ambient linking must cover every port")
        for key, val in self.link.items():
            if self.link.get(val) != key:
                raise ConstraintViolated("ambient linking is not an involution")

    def to_json(self) -> str:
        return json.dumps(
            {
                "rectangles": {str(r): d for r, d in self.rect_degree.items()},
                "link": [
                    [list(map(str, (a[0],))) + list(a[1:]),
                     list(map(str, (b[0],))) + list(b[1:])]
                    for a, b in sorted(
                        (k, v) for k, v in self.link.items() if k <= v
                    )
                ],
                "free_loops": list(self.free_loops),
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "StrandNetwork":
        doc = json.loads(text)
        degree = {r: d for r, d in doc["rectangles"].items()}
        link = {}
        for a, b in doc["link"]:
            ka = (a[0], int(a[1]), int(a[2]))
            kb = (b[0], int(b[1]), int(b[2]))
            link[ka] = kb
            link[kb] = ka
        sn = StrandNetwork(degree, link, list(doc.get("free_loops", [])))
        sn.validate()
        return sn


def cabled_unknot(a: int, with_projector: bool) -> StrandNetwork:
    """A closed a-cable: plain (value delta^a) or through one
    antisymmetrizer rectangle (Raw value delta(delta-1)...(delta-a+1))."""
    if not with_projector:
        return StrandNetwork({}, {}, [a])
    link = {}
    for p in range(a):
        link[("r", 1, p)] = ("r", 0, p)
        link[("r", 0, p)] = ("r", 1, p)
    sn = StrandNetwork({"r": a}, link)
    sn.validate()
    return sn


def medial(net: LabelledNetwork) -> StrandNetwork:
    """The medial strand network: one rectangle per edge (degree = label),
    ambient links determined by the internal counts at each vertex.

    Ports on each rectangle side are indexed in the frame of the edge's
    side-0 end; consecutive edge-ends (h, h') in a vertex rotation are
    joined by m = (l_h + l_h' - l_other)/2 lines matching the last m ports
    of h against the first m of h', with the index flipped on side-1 ends
    so both sides of a rectangle are traversed coherently.
    """
    net.validate()
    label = {ei: net.edges[ei][2] for ei in range(len(net.edges))}
    link = {}

    def pidx(end, p):
        # convert a port index local to this edge-end into the edge frame
        ei, side = end
        return p if side == 0 else label[ei] - 1 - p

    for v in net.vertices:
        rot = net.rotation[v]
        for i in range(3):
            h, nh = rot[i], rot[(i + 1) % 3]
            other = rot[(i + 2) % 3]
            m2 = net.end_label(h) + net.end_label(nh) - net.end_label(other)
            if m2 < 0 or m2 % 2:
                raise InadmissibleLabel(f"inadmissible triple at vertex {v!r}")
            m = m2 // 2
            dh = net.end_label(h)
            for j in range(m):
                a = (h[0], h[1], pidx(h, dh - 1 - j))
                b = (nh[0], nh[1], pidx(nh, j))
                link[a] = b
                link[b] = a
    degree = dict(label)
    # a labelled free circle is a projected cable closed on itself
    for li, a in enumerate(net.free_loops):
        r = f"loop{li}"
        degree[r] = a
        for p in range(a):
            link[(r, 1, p)] = (r, 0, p)
            link[(r, 0, p)] = (r, 1, p)
    sn = StrandNetwork(rect_degree=degree, link=link)
    sn.validate()
    return sn


# --------------------------------------------------------------------------
# Chromatic state sum.


def _inversions(p) -> int:
    return sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )


def chromatic_eval(sn: StrandNetwork, normalization: str = "Raw") -> DeltaPoly:
    """The state sum over permutation assignments to the rectangles.

    normalization: "Raw" or "ProjectorNormalized" (divide by prod d_r!).
    """
    if normalization not in ("Raw", "ProjectorNormalized"):
        raise ConstraintViolated(f"unknown normalization {normalization!r}")
    sn.validate()
    rects = sorted(sn.rect_degree, key=str)
    total_lines = sum(sn.rect_degree.values())
    if total_lines > MAX_TOTAL_LINES:
        raise StateSpaceTooLarge(f"{total_lines} lines exceeds the budget")
    states = 1
    for r in rects:
        states *= factorial(sn.rect_degree[r])
        if states > MAX_STATES:
            raise StateSpaceTooLarge("too many permutation states")

    totals: dict[int, int] = {}

    def loop_count(perm: dict) -> int:
        seen = set()
        loops = 0
        for r in rects:
            for p in range(sn.rect_degree[r]):
                start = (r, 0, p)
                if start in seen:
                    continue
                loops += 1
                cur = start
                while True:
                    rr, side, k = cur
                    seen.add(cur)
                    if side == 0:
                        nxt = (rr, 1, perm[rr][k])
                    else:
                        nxt = (rr, 0, perm[rr].index(k))
                    seen.add(nxt)
                    cur = sn.link[nxt]
                    if cur == start:
                        break
        return loops

    def rec(i: int, perm: dict, sign: int) -> None:
        if i == len(rects):
            L = loop_count(perm)
            totals[L] = totals.get(L, 0) + sign
            return
        r = rects[i]
        for p in permutations(range(sn.rect_degree[r])):
            perm[r] = p
            rec(i + 1, perm, sign * (-1) ** _inversions(p))
        perm.pop(r, None)

    rec(0, {}, 1)
    poly = DeltaPoly.from_dict({d: Fraction(c) for d, c in totals.items()})
    for a in sn.free_loops:
        poly = poly * DeltaPoly.from_dict({a: Fraction(1)})
    if normalization == "ProjectorNormalized":
        norm = 1
        for r in rects:
            norm *= factorial(sn.rect_degree[r])
        poly = poly.scale(Fraction(1, norm))
    return poly


def penrose_eval(sn: StrandNetwork, normalization: str = "Raw") -> Fraction:
    """The chromatic evaluation at delta = -2."""
    return chromatic_eval(sn, normalization)(-2)


# --------------------------------------------------------------------------
# Tetrahedron symbols.


@dataclass(frozen=True)
class TetrahedronSymbol:
    """3x4 grid z[i][j]: the i-th internal strand count at vertex j+1 of
    the reference tetrahedron embedding (corner i joins the i-th and
    (i+1)-st edge-ends of the vertex rotation)."""

    z: tuple  # 3 rows of 4

    @staticmethod
    def from_rows(rows) -> "TetrahedronSymbol":
        if len(rows) != 3 or any(len(r) != 4 for r in rows):
            raise ConstraintViolated("tetrahedron symbol must be a 3x4 grid")
        return TetrahedronSymbol(tuple(tuple(r) for r in rows))

    def row_sums(self):
        return [sum(r) for r in self.z]

    def col_sums(self):
        return [sum(self.z[i][j] for i in range(3)) for j in range(4)]


def tetrahedron_check(t: TetrahedronSymbol) -> bool:
    """Grid nonnegative and total row sum equals total column sum."""
    if any(x < 0 for row in t.z for x in row):
        raise ConstraintViolated("tetrahedron grid entries must be nonnegative")
    return sum(t.row_sums()) == sum(t.col_sums())


def tetrahedron_edge_labels(t: TetrahedronSymbol) -> list:
    """Reconstruct the 6 edge labels of the reference K4 embedding from the
    corner counts; the two endpoint side sums of each edge must agree."""
    if not tetrahedron_check(t):
        raise ConstraintViolated("row/column sums do not balance")
    ref = tetrahedron_network()  # rotation layout source
    # label demanded at each edge-end: sum of the two adjacent corner counts
    demand: dict = {}
    for j, v in enumerate(ref.vertices):
        rot = ref.rotation[v]
        for i in range(3):
            end = rot[i]
            # end sits between corners (i-1, i) and (i, i+1): rows (i-1)%3, i
            demand[end] = t.z[(i - 1) % 3][j] + t.z[i][j]
    labels = []
    for ei in range(6):
        l0 = demand[(ei, 0)]
        l1 = demand[(ei, 1)]
        if l0 != l1:
            raise ConstraintViolated(
                f"edge {ei}: opposite side sums differ ({l0} vs {l1})"
            )
        labels.append(l0)
    return labels


def tetrahedron_chromatic(
    t: TetrahedronSymbol, normalization: str = "Raw"
) -> DeltaPoly:
    """Chromatic evaluation of the strand network of a tetrahedron symbol."""
    labels = tetrahedron_edge_labels(t)
    if all(l == 0 for l in labels):
        return DeltaPoly.one()
    net = tetrahedron_network(labels)
    return chromatic_eval(medial(net), normalization)


# --------------------------------------------------------------------------
# Classical gamma-matrix oracle.


def _kron_int(a, b):
    n, m = len(a), len(b)
    return [
        [a[i // m][j // m] * b[i % m][j % m] for j in range(n * m)]
        for i in range(n * m)
    ]


def _matmul_int(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def gamma_matrices(k: int) -> list:
    """2k gamma matrices of size 2^k for the split metric
    diag(+1, -1, +1, -1, ...), built from the integer Pauli ladder:
    gamma_{2i-1} = Z...Z X 1...1 (squares to +1),
    gamma_{2i}   = Z...Z (XZ) 1...1 (squares to -1)."""
    if k < 1 or k > 3:
        raise UnsupportedSize("gamma oracle supports k in {1, 2, 3}")
    X = [[0, 1], [1, 0]]
    ZM = [[1, 0], [0, -1]]
    XZ = [[0, -1], [1, 0]]
    I2 = [[1, 0], [0, 1]]
    out = []
    for i in range(1, k + 1):
        for head in (X, XZ):
            m = [[1]]
            for j in range(1, k + 1):
                if j < i:
                    blk = ZM
                elif j == i:
                    blk = head
                else:
                    blk = I2
                m = _kron_int(m, blk)
            out.append(m)
    return out


def gamma_metric(k: int) -> list:
    """Diagonal split metric: g_{mu,mu} = +1 for odd mu, -1 for even mu."""
    return [1 if mu % 2 == 0 else -1 for mu in range(2 * k)]


def check_clifford(k: int) -> bool:
    gs = gamma_matrices(k)
    g = gamma_metric(k)
    dim = 2**k
    for a in range(2 * k):
        for b in range(a, 2 * k):
            anti = [
                [
                    sum(
                        gs[a][i][l] * gs[b][l][j] + gs[b][i][l] * gs[a][l][j]
                        for l in range(dim)
                    )
                    for j in range(dim)
                ]
                for i in range(dim)
            ]
            want = 2 * g[a] if a == b else 0
            for i in range(dim):
                for j in range(dim):
                    if anti[i][j] != (want if i == j else 0):
                        return False
    return True


def gamma_oracle_trace(k: int, word: list, matching: list) -> Fraction:
    """Tr(gamma^{mu_1} ... gamma^{mu_L}) with the word positions contracted
    pairwise per ``matching`` (a list of disjoint position pairs covering
    the word); each contracted pair sums over a common index with the
    metric factor g_{mu,mu}.

    ``word`` gives a slot id per position; positions with equal slot ids
    must be matched together (the slots name the contractions).
    """
    L = len(word)
    if L % 2 or L > 8:
        raise UnsupportedSize("word length must be even and at most 8")
    pairs = [tuple(p) for p in matching]
    flat = [i for p in pairs for i in p]
    if sorted(flat) != list(range(L)):
        raise ConstraintViolated("matching must cover each position once")
    gs = gamma_matrices(k)
    g = gamma_metric(k)
    dim = 2**k
    m = L // 2
    total = 0
    # assign an index to each pair; positions in a pair share it
    idx = [0] * L

    def rec(pi: int):
        nonlocal total
        if pi == m:
            mat = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
            for pos in range(L):
                mat = _matmul_int(mat, gs[idx[pos]])
            tr = sum(mat[i][i] for i in range(dim))
            weight = 1
            for a, b in pairs:
                weight *= g[idx[a]]
            total += weight * tr
            return
        a, b = pairs[pi]
        for mu in range(2 * k):
            idx[a] = mu
            idx[b] = mu
            rec(pi + 1)

    rec(0)
    return Fraction(total)
