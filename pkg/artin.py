"""
Artin systems
Labelled defining graphs, standard presentations, finite-type recognition and
the graph-level certificates for perfectness, free quotients and generator bounds
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from config import config
from errors import InputError
from freegroup import AbMap, FreeWord
from models import CoxeterFamily, GraphEdge, GraphFile, TypeTag

logger = logging.getLogger(__name__)


class LabeledGraph:
    """Defining graph of an Artin system.

    Vertices are the integers 0..n-1 with display names; stored edges carry
    labels >= 3 and every absent pair has label 2.
    """

    def __init__(self, names: Sequence[str], edges: Sequence[Tuple[int, int, int]] = (),
                 name: Optional[str] = None):
        self.names = list(names)
        self.name = name
        if not self.names:
            raise InputError("a graph needs at least one vertex")
        if len(set(self.names)) != len(self.names):
            raise InputError("vertex names must be unique")
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(len(self.names)))
        for u, v, label in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) joins an unknown vertex")
            if u == v:
                raise InputError(f"self-loop at vertex {self.names[u]}")
            if label < 3:
                raise InputError(f"stored edges need labels >= 3, got {label}")
            if self.graph.has_edge(u, v):
                raise InputError(f"duplicate edge {self.names[u]}-{self.names[v]}")
            self.graph.add_edge(u, v, label=int(label))

    @classmethod
    def from_file(cls, data: GraphFile) -> "LabeledGraph":
        index = {v: i for i, v in enumerate(data.vertices)}
        edges = [(index[e.u], index[e.v], e.label) for e in data.edges]
        return cls(data.vertices, edges, name=data.name)

    def to_file(self) -> GraphFile:
        return GraphFile(
            name=self.name,
            vertices=list(self.names),
            edges=[GraphEdge(u=self.names[u], v=self.names[v], label=label)
                   for u, v, label in self.edges()])

    @property
    def n(self) -> int:
        return len(self.names)

    def label(self, u: int, v: int) -> int:
        if self.graph.has_edge(u, v):
            return self.graph[u][v]["label"]
        return 2

    def edges(self) -> List[Tuple[int, int, int]]:
        return sorted((min(u, v), max(u, v), d["label"]) for u, v, d in self.graph.edges(data=True))

    def odd_subgraph(self) -> nx.Graph:
        odd = nx.Graph()
        odd.add_nodes_from(self.graph.nodes)
        odd.add_edges_from((u, v, d) for u, v, d in self.graph.edges(data=True) if d["label"] % 2)
        return odd

    def permuted(self, perm: Sequence[int]) -> "LabeledGraph":
        """Copy with vertex i moved to position perm[i]"""
        names = [""] * self.n
        for i, target in enumerate(perm):
            names[target] = self.names[i]
        return LabeledGraph(names, [(perm[u], perm[v], label) for u, v, label in self.edges()],
                            name=self.name)

    def describe(self) -> str:
        return self.name or f"graph on {', '.join(self.names)}"


@dataclass
class Presentation:
    """Generators with relators, all freely and cyclically reduced"""
    generators: List[str]
    relators: List[FreeWord] = field(default_factory=list)

    def render(self) -> List[str]:
        return [r.format(self.generators) for r in self.relators]


def artin_relator(i: int, j: int, label: int) -> FreeWord:
    """u(s_i, s_j) u(s_j, s_i)^-1 for alternating words of length `label`"""
    return FreeWord.alternating(i, j, label) * FreeWord.alternating(j, i, label).inverse()


def standard_presentation(g: LabeledGraph, free_product: Optional[bool] = None) -> Presentation:
    if free_product is None:
        free_product = config.free_product_convention
    relators = []
    for i, j in combinations(range(g.n), 2):
        label = g.label(i, j)
        if label == 2 and free_product:
            continue
        relators.append(artin_relator(i, j, label))
    return Presentation(generators=list(g.names), relators=relators)


# Finite type recognition

def _path(n: int, labels: Sequence[int]) -> List[Tuple[int, int, int]]:
    return [(k, k + 1, labels[k]) for k in range(n - 1)]


def finite_type_graph(tag: TypeTag) -> LabeledGraph:
    """Coxeter graph of an irreducible finite type, vertices s1..sn"""
    family, n = tag.family, tag.parameter
    if family == CoxeterFamily.I2.value:
        return LabeledGraph(["s1", "s2"], [(0, 1, n)], name=str(tag))
    names = [f"s{k + 1}" for k in range(n)]
    if family == CoxeterFamily.A.value:
        edges = _path(n, [3] * (n - 1))
    elif family == CoxeterFamily.B.value:
        edges = _path(n, [3] * (n - 2) + [4])
    elif family == CoxeterFamily.D.value:
        edges = _path(n - 1, [3] * (n - 2)) + [(n - 3, n - 1, 3)]
    elif family == CoxeterFamily.E.value:
        edges = _path(n - 1, [3] * (n - 2)) + [(2, n - 1, 3)]
    elif family == CoxeterFamily.F.value:
        edges = _path(4, [3, 4, 3])
    else:
        edges = _path(n, [5] + [3] * (n - 2))
    return LabeledGraph(names, edges, name=str(tag))


def _candidates(size: int) -> List[TypeTag]:
    tags = [TypeTag(family=CoxeterFamily.A, parameter=size),
            TypeTag(family=CoxeterFamily.B, parameter=size)]
    if size >= 4:
        tags.append(TypeTag(family=CoxeterFamily.D, parameter=size))
    if size in (6, 7, 8):
        tags.append(TypeTag(family=CoxeterFamily.E, parameter=size))
    if size == 4:
        tags.append(TypeTag(family=CoxeterFamily.F, parameter=4))
    if size in (3, 4):
        tags.append(TypeTag(family=CoxeterFamily.H, parameter=size))
    return tags


def _same_label(a: Dict, b: Dict) -> bool:
    return a["label"] == b["label"]


def coxeter_components(g: LabeledGraph) -> List[List[int]]:
    return sorted((sorted(c) for c in nx.connected_components(g.graph)), key=lambda c: c[0])


def _classify_component(sub: nx.Graph) -> Optional[TypeTag]:
    size = sub.number_of_nodes()
    if size == 1:
        return TypeTag(family=CoxeterFamily.A, parameter=1)
    if sub.number_of_edges() != size - 1:
        return None
    if size == 2:
        (_, _, label), = sub.edges(data="label")
        if label == 3:
            return TypeTag(family=CoxeterFamily.A, parameter=2)
        if label == 4:
            return TypeTag(family=CoxeterFamily.B, parameter=2)
        return TypeTag(family=CoxeterFamily.I2, parameter=label)
    for tag in _candidates(size):
        if nx.is_isomorphic(sub, finite_type_graph(tag).graph, edge_match=_same_label):
            return tag
    return None


def classify_finite_type(g: LabeledGraph) -> Optional[List[TypeTag]]:
    """TypeTags of the Coxeter graph components, or None when some component is not of finite type"""
    tags = []
    for component in coxeter_components(g):
        tag = _classify_component(g.graph.subgraph(component))
        if tag is None:
            logger.debug(f"component {[g.names[v] for v in component]} is not of finite type")
            return None
        tags.append(tag)
    return tags


# Abelianization

def odd_components(g: LabeledGraph) -> List[List[int]]:
    return sorted((sorted(c) for c in nx.connected_components(g.odd_subgraph())), key=lambda c: c[0])


def abelianization_structure(g: LabeledGraph) -> AbMap:
    """Generators of one odd component share one basis vector of the abelianization"""
    components = odd_components(g)
    rank = len(components)
    images: List[Tuple[int, ...]] = [()] * g.n
    for index, component in enumerate(components):
        basis = tuple(1 if k == index else 0 for k in range(rank))
        for v in component:
            images[v] = basis
    return AbMap(rank=rank, images=tuple(images))


def odd_spanning_tree(g: LabeledGraph) -> Optional[nx.Graph]:
    """Spanning tree of odd edges minimizing the sum of (label - 1), or None"""
    odd = g.odd_subgraph()
    if not nx.is_connected(odd):
        return None
    for u, v, d in odd.edges(data=True):
        d["weight"] = d["label"] - 1
    return nx.minimum_spanning_tree(odd, weight="weight")


def derived_generators_bound(g: LabeledGraph) -> Optional[int]:
    tree = odd_spanning_tree(g)
    if tree is None:
        return None
    return sum(d["label"] - 1 for _, _, d in tree.edges(data=True))


# Structural certificates

@dataclass
class PerfectnessCertificate:
    tree: List[Tuple[int, int]]
    witness_kind: str
    witness: Tuple[int, ...]

    def render(self, names: Sequence[str]) -> str:
        edges = ", ".join(f"{names[u]}-{names[v]}" for u, v in self.tree)
        witness = "-".join(names[v] for v in self.witness)
        return f"tree [{edges}], {self.witness_kind} witness {witness}"


def _edge_key(tree: nx.Graph) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted((min(u, v), max(u, v)) for u, v in tree.edges))


def _odd_trees(g: LabeledGraph, limit: int) -> List[Tuple[Tuple[int, int], ...]]:
    odd = g.odd_subgraph()
    if not nx.is_connected(odd):
        return []
    if nx.is_tree(odd):
        return [_edge_key(odd)]
    trees = []
    for tree in nx.algorithms.tree.mst.SpanningTreeIterator(odd):
        trees.append(_edge_key(tree))
        if len(trees) >= limit:
            logger.warning(f"spanning tree enumeration stopped at {limit} trees")
            break
    return sorted(trees)


def _distance_two_pairs_commute(g: LabeledGraph, tree: nx.Graph) -> bool:
    for center in tree.nodes:
        for a, b in combinations(sorted(tree[center]), 2):
            if g.label(a, b) != 2:
                return False
    return True


def _segments(tree: nx.Graph) -> List[Tuple[int, int, int, int]]:
    paths = []
    for b, c in sorted(_edge_key(tree)):
        for x, y in ((b, c), (c, b)):
            for a in sorted(tree[x]):
                if a == y:
                    continue
                for d in sorted(tree[y]):
                    if d != x and (a, x, y, d) < (d, y, x, a):
                        paths.append((a, x, y, d))
    return sorted(set(paths))


def perfectness_structural_certificate(g: LabeledGraph, free_product: Optional[bool] = None,
                                       max_trees: Optional[int] = None) -> Optional[PerfectnessCertificate]:
    """Odd spanning tree with commuting distance-2 pairs and an A4, H3 or odd-segment witness.

    None only means the certificate was not found.
    """
    if free_product is None:
        free_product = config.free_product_convention
    if free_product or g.n < 3:
        return None
    limit = max_trees or config.max_spanning_trees
    for key in _odd_trees(g, limit):
        tree = nx.Graph()
        tree.add_nodes_from(range(g.n))
        tree.add_edges_from(key)
        if not _distance_two_pairs_commute(g, tree):
            continue
        segments = [p for p in _segments(tree) if g.label(p[0], p[3]) == 2]
        for path in segments:
            if all(g.label(u, v) == 3 for u, v in zip(path, path[1:])):
                return PerfectnessCertificate(list(key), "A4", path)
        for center in sorted(tree.nodes):
            for a, b in combinations(sorted(tree[center]), 2):
                if {g.label(a, center), g.label(center, b)} == {3, 5}:
                    first, last = (a, b) if g.label(a, center) == 5 else (b, a)
                    return PerfectnessCertificate(list(key), "H3", (first, center, last))
        if segments:
            return PerfectnessCertificate(list(key), "odd-segment", segments[0])
    return None


def _tree_distances(g: LabeledGraph, root: int = 0) -> Optional[Dict[int, int]]:
    edges = g.edges()
    labels = {label for _, _, label in edges}
    if len(labels) != 1 or not all(label % 2 for label in labels):
        return None
    if not nx.is_tree(g.graph):
        return None
    return nx.single_source_shortest_path_length(g.graph, root)


def free_quotient_obstruction(g: LabeledGraph, free_product: Optional[bool] = None) -> Optional[int]:
    """Rank 2m of a free quotient of the derived group, when the parity epimorphism exists"""
    if free_product is None:
        free_product = config.free_product_convention
    distances = _tree_distances(g)
    if distances is None:
        return None
    if not free_product:
        tree_lengths = dict(nx.all_pairs_shortest_path_length(g.graph))
        for u, v in combinations(range(g.n), 2):
            if g.label(u, v) == 2 and tree_lengths[u][v] % 2:
                return None
    label = g.edges()[0][2]
    return label - 1


def free_quotient_partition(g: LabeledGraph, root: int = 0) -> Optional[Tuple[List[str], List[str]]]:
    """Generators at even and at odd tree distance from `root`"""
    distances = _tree_distances(g, root)
    if distances is None:
        return None
    even = [g.names[v] for v in range(g.n) if distances[v] % 2 == 0]
    odd = [g.names[v] for v in range(g.n) if distances[v] % 2]
    return even, odd


# Two-generator systems

def _rewrite_in_conjugates(word: FreeWord, s: int) -> Tuple[List[int], int]:
    """Indices n of the conjugates s^n (s' s^-1) s^-n met along a positive word, and the final power of s"""
    indices = []
    power = 0
    for gen, _ in word.letters():
        if gen != s:
            indices.append(power)
        power += 1
    return indices, power


def _conjugate_relator(left: List[int], right: List[int]) -> FreeWord:
    return FreeWord((n, 1) for n in left) * FreeWord((n, 1) for n in right).inverse()


def generalized_artin_certificate(v1: FreeWord, v2: FreeWord) -> int:
    """Rank of the free kernel of the map onto Z for the relation v1 = v2"""
    if not (v1.is_positive and v2.is_positive):
        raise InputError("words must be positive")
    letters = set(v1.generators()) | set(v2.generators())
    if len(letters) != 2:
        raise InputError("words must use exactly two generators")
    if len(v1) != len(v2):
        raise InputError("word lengths differ")
    length = len(v1)
    if length % 2 == 0:
        raise InputError("word length must be odd")
    m = length // 2
    first1, first2 = v1.letters()[0][0], v2.letters()[0][0]
    if first1 == first2:
        raise InputError("initial letters equal")
    if v1.letters()[-1][0] == v2.letters()[-1][0]:
        raise InputError("terminal letters equal")
    s, s_prime = first1, first2
    if sum(1 for g, _ in v1.letters() if g == s) != m + 1:
        raise InputError("s must occur m+1 times in v1")
    if sum(1 for g, _ in v2.letters() if g == s_prime) != m + 1:
        raise InputError("s' must occur m+1 times in v2")

    left, p1 = _rewrite_in_conjugates(v1, s)
    right, p2 = _rewrite_in_conjugates(v2, s)
    top = length - 1
    if p1 != p2:
        raise InputError("powers of s do not cancel")
    if any(not 0 <= n <= top for n in left + right):
        raise InputError("conjugate index outside [0, 2m]")
    for extreme in (0, top):
        occurrences = (left + right).count(extreme)
        if occurrences != 1:
            raise InputError(f"conjugate u_{extreme} must occur exactly once, found {occurrences}")
    logger.debug(f"generalized relator {_conjugate_relator(left, right)} gives free rank {top}")
    return top


@dataclass
class OddDihedral:
    rank: int
    relator: FreeWord
    left: List[int]
    right: List[int]

    def render(self) -> str:
        left = " ".join(f"a_{n}" for n in self.left)
        right = " ".join(f"a_{n}^-1" for n in reversed(self.right))
        return f"({left}) ({right})"


def odd_dihedral_derived(m: int) -> OddDihedral:
    """Derived group of the label 2m+1 system: free of rank 2m with staircase relator r0"""
    if m < 1:
        raise InputError(f"m must be at least 1, got {m}")
    s, s_prime = 0, 1
    v1 = FreeWord(((s, 1),)) * FreeWord.alternating(s_prime, s, 2 * m)
    v2 = FreeWord.alternating(s_prime, s, 2 * m) * FreeWord(((s_prime, 1),))
    left, _ = _rewrite_in_conjugates(v1, s)
    right, _ = _rewrite_in_conjugates(v2, s)
    rank = generalized_artin_certificate(v1, v2)
    for side in (left, right):
        if any(b <= a for a, b in zip(side, side[1:])):
            raise InputError("staircase indices must increase")
    return OddDihedral(rank=rank, relator=_conjugate_relator(left, right), left=left, right=right)


def inverted_relator_check(relator: FreeWord) -> bool:
    """Inverting every generator maps the relator to a cyclic conjugate of itself or its inverse"""
    image = relator.invert_generators()
    return image.is_cyclic_conjugate(relator) or image.is_cyclic_conjugate(relator.inverse())
