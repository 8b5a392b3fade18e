"""
Homology of the derived group
Builds the chain complex of a presentation over the group ring of the
abelianization, reduces ker d1 / im d2 and reads off its abelian structure
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from artin import Presentation
from config import config
from errors import InputError, InternalError, UnsupportedError
from freegroup import AbMap, abelianized_fox
from laurent import LaurentPoly, default_variable_names
from models import AbelianStructure
from zlinalg import IntegerMatrix, cokernel_structure, is_unimodular, solve_integer_linear, unimodular_inverse

logger = logging.getLogger(__name__)

ModuleVector = List[LaurentPoly]


@dataclass
class ChainData:
    """d2: R^relators -> R^generators -> R :d1, generators block-sorted by image"""
    rank: int
    generators: List[str]
    order: List[int]
    ab_map: AbMap
    d1: List[LaurentPoly]
    d2: List[ModuleVector]

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def image(self, position: int) -> Tuple[int, ...]:
        return self.ab_map.image(self.order[position])

    def render_row(self, row: ModuleVector) -> str:
        return format_vector(row, [f"b_{name}" for name in self.generators], self.rank)


def format_vector(vector: ModuleVector, labels: Sequence[str], rank: int) -> str:
    names = default_variable_names(rank)
    parts = []
    for label, coeff in zip(labels, vector):
        if coeff.is_zero:
            continue
        text = coeff.format(names)
        if coeff.is_constant and coeff.constant_term() == 1:
            parts.append(label)
        elif coeff.is_constant and coeff.constant_term() == -1:
            parts.append(f"-{label}")
        else:
            parts.append(f"({text})*{label}")
    return " + ".join(parts) or "0"


def _basis_index(image: Tuple[int, ...]) -> Optional[int]:
    if sorted(image) == [0] * (len(image) - 1) + [1]:
        return image.index(1)
    return None


def _block_key(image: Tuple[int, ...]) -> int:
    index = _basis_index(image)
    return len(image) if index is None else index


def build_chain(p: Presentation, m: AbMap) -> ChainData:
    """Fox-derivative matrix d2 and augmentation column d1 over Z[Q]"""
    generators, relators = p.generators, p.relators
    if m.ngens != len(generators):
        raise InputError(f"abelianization map covers {m.ngens} generators, presentation has {len(generators)}")
    for index, relator in enumerate(relators):
        if any(m.word_image(relator)):
            raise InputError(f"relator {index} has nonzero image {m.word_image(relator)} in the abelianization")
    order = sorted(range(len(generators)), key=lambda k: (_block_key(m.images[k]), k))
    d1 = [LaurentPoly.one(m.rank) - m.monomial(k) for k in order]
    d2 = [[abelianized_fox(relator, k, m) for k in order] for relator in relators]
    for i, row in enumerate(d2):
        total = LaurentPoly.zero(m.rank)
        for entry, boundary in zip(row, d1):
            total = total + entry * boundary
        if not total.is_zero:
            raise InternalError(f"chain condition fails on relator {i}: {total}")
    logger.debug(f"built chain with {len(d2)} rows over rank {m.rank}")
    return ChainData(rank=m.rank, generators=[generators[k] for k in order], order=order,
                     ab_map=m, d1=d1, d2=d2)


def kernel_basis_d1(c: ChainData) -> List[ModuleVector]:
    """Consecutive differences inside blocks of equal image, Koszul vectors between blocks"""
    if c.rank > 2:
        raise UnsupportedError(f"exact homology needs abelianization rank <= 2, got {c.rank}")
    for k in range(c.ngens):
        if _basis_index(c.image(k)) is None:
            raise UnsupportedError(f"generator {c.generators[k]} does not map to a basis element")
    basis = []
    one = LaurentPoly.one(c.rank)
    for k in range(c.ngens - 1):
        vector = [LaurentPoly.zero(c.rank) for _ in range(c.ngens)]
        q = LaurentPoly.monomial(c.image(k))
        q_next = LaurentPoly.monomial(c.image(k + 1))
        if q == q_next:
            vector[k], vector[k + 1] = one, -one
        else:
            vector[k], vector[k + 1] = one - q_next, q - one
        basis.append(vector)
    return basis


def kernel_coordinates(x: ModuleVector, kernel: List[ModuleVector]) -> ModuleVector:
    """Coordinates of x in the triangular kernel basis"""
    rank = x[0].rank if x else 0
    coords: ModuleVector = []
    carry = LaurentPoly.zero(rank)
    for k, vector in enumerate(kernel):
        quotient = (x[k] - carry).divide_exact(vector[k])
        if quotient is None:
            raise InternalError(f"coordinate {k} does not divide by the kernel pivot {vector[k]}")
        coords.append(quotient)
        carry = quotient * vector[k + 1]
    if x and x[-1] != carry:
        raise InternalError("vector does not lie in the span of the kernel basis")
    return coords


def _vector_add(a: ModuleVector, b: ModuleVector) -> ModuleVector:
    return [x + y for x, y in zip(a, b)]


def _vector_scale(factor: LaurentPoly, a: ModuleVector) -> ModuleVector:
    return [factor * x for x in a]


def _is_zero_vector(a: ModuleVector) -> bool:
    return all(x.is_zero for x in a)


def combine(lambdas: Sequence[LaurentPoly], rows: Sequence[ModuleVector]) -> ModuleVector:
    total = [LaurentPoly.zero(rows[0][0].rank) for _ in rows[0]] if rows else []
    for factor, row in zip(lambdas, rows):
        total = _vector_add(total, _vector_scale(factor, row))
    return total


def _window(rank: int, width: int) -> List[Tuple[int, ...]]:
    points = [()]
    for _ in range(rank):
        points = [p + (e,) for p in points for e in range(-width, width + 1)]
    return points


def membership_search(target: ModuleVector, rows: List[ModuleVector], window: Optional[int] = None,
                      coeff_bound: Optional[int] = None,
                      max_unknowns: Optional[int] = None) -> Optional[List[LaurentPoly]]:
    """Multipliers supported in [-D, D]^r combining the rows to the target, or None.

    None is inconclusive: a wider window may still succeed.
    """
    window = config.window if window is None else window
    max_unknowns = max_unknowns or config.max_search_unknowns
    if window < 0:
        raise InputError(f"window must be non-negative, got {window}")
    rank = target[0].rank if target else 0
    if _is_zero_vector(target):
        return [LaurentPoly.zero(rank) for _ in rows]
    if not rows:
        return None
    shifts = _window(rank, window)
    unknowns = [(i, e) for i in range(len(rows)) for e in shifts if not _is_zero_vector(rows[i])]
    if len(unknowns) > max_unknowns:
        logger.warning(f"membership system with {len(unknowns)} unknowns exceeds the cap of {max_unknowns}")
        return None

    equations: Dict[Tuple[int, Tuple[int, ...]], int] = {}

    def equation(k: int, mono: Tuple[int, ...]) -> int:
        return equations.setdefault((k, mono), len(equations))

    entries: List[Tuple[int, int, int]] = []
    for column, (i, e) in enumerate(unknowns):
        for k, coeff in enumerate(rows[i]):
            for mono, c in coeff.terms.items():
                shifted = tuple(a + b for a, b in zip(mono, e))
                entries.append((equation(k, shifted), column, c))
    rhs_terms = [(equation(k, mono), c) for k, coeff in enumerate(target) for mono, c in coeff.terms.items()]

    matrix = IntegerMatrix(len(equations), len(unknowns))
    for row, column, c in entries:
        matrix[row, column] += c
    rhs = [0] * len(equations)
    for row, c in rhs_terms:
        rhs[row] += c
    logger.debug(f"membership system: {len(equations)} equations, {len(unknowns)} unknowns")
    solution = solve_integer_linear(matrix, rhs)
    if solution is None:
        return None
    if coeff_bound is not None and any(abs(x) > coeff_bound for x in solution):
        return None

    lambdas: List[Dict[Tuple[int, ...], int]] = [{} for _ in rows]
    for (i, e), x in zip(unknowns, solution):
        if x:
            lambdas[i][e] = x
    result = [LaurentPoly(rank, terms) for terms in lambdas]
    if combine(result, rows) != list(target):
        raise InternalError("membership combination failed re-multiplication")
    return result


# Reduction of the relation module

@dataclass
class Relations:
    """Module R^alive modulo the listed rows; columns outside `alive` are eliminated"""
    rank: int
    width: int
    rows: List[ModuleVector]
    alive: List[int]
    trace: List[str] = field(default_factory=list)

    def support(self, row: ModuleVector) -> List[int]:
        return [j for j in self.alive if not row[j].is_zero]

    def cleanup(self):
        seen = set()
        kept = []
        for row in self.rows:
            key = tuple(row[j] for j in self.alive)
            if _is_zero_vector(list(key)) or key in seen:
                continue
            seen.add(key)
            kept.append(row)
        self.rows = kept

    def is_diagonal(self) -> bool:
        return all(len(self.support(row)) == 1 for row in self.rows)

    def state(self) -> Tuple:
        return tuple(tuple(row[j] for j in self.alive) for row in self.rows)


def _row_size(row: ModuleVector, columns: Sequence[int]) -> Tuple[int, int]:
    entries = [row[j] for j in columns if not row[j].is_zero]
    return sum(len(e.terms) for e in entries), sum(e.total_span() for e in entries)


def _reduction_moves(target: ModuleVector, source: ModuleVector,
                     columns: Sequence[int]) -> List[Tuple[int, Tuple[int, ...]]]:
    """(q, shift) pairs for which target - q * x^shift * source cancels a term of target"""
    moves = set()
    for j in columns:
        for mono, a in target[j].terms.items():
            for base, b in source[j].terms.items():
                if a % b == 0:
                    moves.add((a // b, tuple(x - y for x, y in zip(mono, base))))
    return sorted(moves)


def interreduce(rows: List[ModuleVector], columns: Sequence[int], max_passes: int) -> List[ModuleVector]:
    """Shrink rows by subtracting integer monomial multiples of other rows.

    Each pass applies the single move with the largest drop in term count,
    ties broken by total span. The row span over Z[Q] is unchanged.
    """
    rows = [list(row) for row in rows]
    for _ in range(max_passes):
        best = None
        for i, target in enumerate(rows):
            terms, spread = _row_size(target, columns)
            if not terms:
                continue
            for k, source in enumerate(rows):
                if k == i or not _row_size(source, columns)[0]:
                    continue
                for q, shift in _reduction_moves(target, source, columns):
                    candidate = [a - (b * q).shift(shift) for a, b in zip(target, source)]
                    new_terms, new_spread = _row_size(candidate, columns)
                    gain = (new_terms - terms, new_spread - spread)
                    if gain < (0, 0) and (best is None or gain < best[0]):
                        best = (gain, i, candidate)
        if best is None:
            break
        _, i, candidate = best
        rows[i] = candidate
    return rows


def _interreduce_relations(rel: Relations) -> bool:
    reduced = interreduce(rel.rows, rel.alive, config.max_reduction_rounds)
    if [[row[j] for j in rel.alive] for row in reduced] == [[row[j] for j in rel.alive] for row in rel.rows]:
        return False
    rel.rows = reduced
    rel.trace.append("relations interreduced by monomial multiples")
    logger.debug(f"interreduced {len(reduced)} relation rows")
    return True


def _eliminate_unit(rel: Relations) -> bool:
    best = None
    for index, row in enumerate(rel.rows):
        support = rel.support(row)
        for j in support:
            if row[j].is_unit:
                key = (len(support), index, j)
                if best is None or key < best:
                    best = key
                break
    if best is None:
        return False
    _, index, j = best
    pivot_row = rel.rows.pop(index)
    inverse = pivot_row[j].unit_inverse()
    for k, row in enumerate(rel.rows):
        if not row[j].is_zero:
            rel.rows[k] = _vector_add(row, _vector_scale(-(row[j] * inverse), pivot_row))
    rel.alive.remove(j)
    rel.trace.append(f"unit entry eliminates generator u{j + 1}")
    logger.debug(f"eliminated u{j + 1} by a unit entry")
    return True


def _euclid_candidates(rel: Relations, j: int) -> List[Tuple[Tuple, int, Optional[int]]]:
    candidates = []
    for index, row in enumerate(rel.rows):
        entry = row[j]
        if entry.is_zero:
            continue
        nnz = len(rel.support(row))
        if entry.is_constant:
            candidates.append(((0, nnz, 1, index), index, None))
            continue
        for var in range(rel.rank):
            if entry.is_univariate_in(var) and entry.span(var) >= 1 \
                    and abs(entry.extremal_coeff(var, "leading")) == 1:
                candidates.append(((entry.span(var), nnz, len(entry.terms), index), index, var))
    return sorted(candidates)


def _column_euclid(rel: Relations) -> bool:
    """Reduce one column by a pivot entry with unit leading coefficient"""
    for j in list(rel.alive):
        for _, index, var in _euclid_candidates(rel, j):
            pivot_row = rel.rows[index]
            pivot = pivot_row[j]
            changed = False
            for k, row in enumerate(rel.rows):
                entry = row[j]
                if k == index or entry.is_zero:
                    continue
                if var is None:
                    if not entry.is_constant or abs(entry.constant_term()) < abs(pivot.constant_term()):
                        continue
                    q = LaurentPoly.constant(entry.constant_term() // pivot.constant_term(), rel.rank)
                else:
                    if entry.span(var) < pivot.span(var):
                        continue
                    q, _ = entry.div_rem(pivot, var)
                if q.is_zero:
                    continue
                rel.rows[k] = _vector_add(row, _vector_scale(-q, pivot_row))
                changed = True
            if changed:
                logger.debug(f"column u{j + 1} reduced by pivot {pivot}")
                return True
    return False


def _search_unit_vector(rel: Relations, window: int, coeff_bound: Optional[int], tried: set) -> bool:
    columns = [j for j in rel.alive if j not in tried]
    for j in columns:
        tried.add(j)
        restricted = [[row[k] for k in rel.alive] for row in rel.rows]
        target = [LaurentPoly.one(rel.rank) if k == j else LaurentPoly.zero(rel.rank) for k in rel.alive]
        found = membership_search(target, restricted, window, coeff_bound)
        if found is not None:
            unit_row = [LaurentPoly.zero(rel.rank) for _ in range(rel.width)]
            unit_row[j] = LaurentPoly.one(rel.rank)
            rel.rows.append(unit_row)
            rel.trace.append(f"membership search puts u{j + 1} into im d2")
            logger.info(f"membership search found u{j + 1} in the image of d2")
            return True
    return False


def quotient_structure(c: ChainData, kernel: List[ModuleVector], window: Optional[int] = None,
                       coeff_bound: Optional[int] = None) -> AbelianStructure:
    """Abelian structure of ker d1 / im d2"""
    window = config.window if window is None else window
    rounds = config.max_reduction_rounds
    rows = [kernel_coordinates(row, kernel) for row in c.d2]
    rel = Relations(rank=c.rank, width=len(kernel), rows=rows, alive=list(range(len(kernel))))
    rel.trace.append(f"{len(rows)} relations on {len(kernel)} kernel generators")
    tried: set = set()
    stalled: set = set()

    for _ in range(rounds):
        rel.cleanup()
        if not rel.alive:
            break
        if _eliminate_unit(rel):
            continue
        if _column_euclid(rel):
            continue
        if rel.is_diagonal():
            break
        if _search_unit_vector(rel, window, coeff_bound, tried):
            continue
        state = rel.state()
        if state in stalled or not _interreduce_relations(rel):
            break
        stalled.add(state)
        tried.clear()
    else:
        logger.warning(f"reduction stopped after {rounds} rounds")

    rel.cleanup()
    if not rel.alive:
        return AbelianStructure.trivial().with_notes(rel.trace + ["every kernel generator lies in im d2"])
    if not rel.is_diagonal():
        logger.warning("relation rows do not split into cyclic factors")
        return AbelianStructure.unknown().with_notes(
            rel.trace + [f"residual relations on u{', u'.join(str(j + 1) for j in rel.alive)} are not diagonal"])

    result = AbelianStructure.trivial()
    for j in rel.alive:
        ideal = [row[j] for row in rel.rows if not row[j].is_zero]
        names = default_variable_names(c.rank)
        factor = tower_rank(ideal, c.rank)
        rel.trace.append(f"u{j + 1}: R/({', '.join(g.format(names) for g in ideal) or '0'}) -> {factor.describe()}")
        result = result.direct_sum(factor)
    logger.info(f"quotient structure: {result.describe()}")
    return AbelianStructure(kind=result.kind, rank=result.rank, torsion=result.torsion,
                            certificate=rel.trace + list(result.certificate))


# Tower elimination

MatrixPoly = Dict[Tuple[int, ...], IntegerMatrix]


class _Tower:
    def __init__(self, rank: int):
        self.rank = rank
        self.size = 1
        self.remaining = list(range(rank))
        self.actions: Dict[int, IntegerMatrix] = {}
        self.inverses: Dict[int, IntegerMatrix] = {}
        self._powers: Dict[Tuple[int, int], IntegerMatrix] = {}

    def power(self, var: int, e: int) -> IntegerMatrix:
        key = (var, e)
        if key not in self._powers:
            if e == 0:
                self._powers[key] = IntegerMatrix.identity(self.size)
            elif e > 0:
                self._powers[key] = self.power(var, e - 1) @ self.actions[var]
            else:
                self._powers[key] = self.power(var, e + 1) @ self.inverses[var]
        return self._powers[key]

    def evaluate(self, f: LaurentPoly) -> MatrixPoly:
        result: MatrixPoly = {}
        for exps, coeff in f.terms.items():
            matrix = IntegerMatrix.identity(self.size).scale(coeff)
            for var in self.actions:
                if exps[var]:
                    matrix = matrix @ self.power(var, exps[var])
            key = tuple(0 if v in self.actions else e for v, e in enumerate(exps))
            result[key] = result[key] + matrix if key in result else matrix
        return {k: m for k, m in result.items() if not m.is_zero}

    def eliminate(self, var: int, poly: MatrixPoly):
        """Quotient by a matrix polynomial in `var` with unimodular extremal matrices"""
        degrees = sorted(k[var] for k in poly)
        lo, hi = degrees[0], degrees[-1]
        span = hi - lo
        blocks = {k[var] - lo: m for k, m in poly.items()}
        n = self.size
        top_inverse = unimodular_inverse(blocks[span])
        companion = IntegerMatrix(n * span, n * span)
        for k in range(span - 1):
            for i in range(n):
                companion[(k + 1) * n + i, k * n + i] = 1
        for k in range(span):
            block = -(blocks.get(k, IntegerMatrix.zeros(n, n)) @ top_inverse)
            for i in range(n):
                for j in range(n):
                    companion[k * n + i, (span - 1) * n + j] = block[i, j]
        self.actions = {v: IntegerMatrix.block_diagonal(m, span) for v, m in self.actions.items()}
        self.actions[var] = companion
        self.inverses = {v: unimodular_inverse(m) for v, m in self.actions.items()}
        self.size = n * span
        self.remaining.remove(var)
        self._powers = {}


def _single_key(poly: MatrixPoly) -> Optional[IntegerMatrix]:
    return next(iter(poly.values())) if len(poly) == 1 else None


def _pivot(tower: _Tower, polys: List[MatrixPoly]) -> Optional[Tuple[int, int, int]]:
    best = None
    for index, poly in enumerate(polys):
        for var in tower.remaining:
            others = [v for v in tower.remaining if v != var]
            if any(k[v] for k in poly for v in others):
                continue
            degrees = [k[var] for k in poly]
            lo, hi = min(degrees), max(degrees)
            if hi == lo:
                continue
            lead = next(m for k, m in poly.items() if k[var] == hi)
            trail = next(m for k, m in poly.items() if k[var] == lo)
            if is_unimodular(lead) and is_unimodular(trail):
                key = (hi - lo, index, var)
                if best is None or key < best:
                    best = key
    return best


def tower_rank(ideal_gens: List[LaurentPoly], r: int, max_steps: Optional[int] = None) -> AbelianStructure:
    """Abelian structure of Z[Q]/(ideal_gens) by successive unit-extremal eliminations"""
    if r > 2:
        raise UnsupportedError(f"tower elimination needs rank <= 2, got {r}")
    max_steps = max_steps or config.max_tower_steps
    gens = [g for g in ideal_gens if not g.is_zero]
    if any(g.rank != r for g in gens):
        raise InputError(f"ideal generators must have rank {r}")
    if any(g.is_unit for g in gens):
        return AbelianStructure.trivial("ideal contains a unit")
    tower = _Tower(r)
    notes = []
    interreduced = False
    for _ in range(max_steps):
        evaluated = [(g, tower.evaluate(g)) for g in gens]
        gens = [g for g, poly in evaluated if poly]
        polys = [poly for _, poly in evaluated if poly]
        for poly in polys:
            single = _single_key(poly)
            if single is not None and is_unimodular(single):
                return AbelianStructure.trivial("ideal contains a unit").with_notes(notes)
        if not tower.remaining:
            matrices = [poly[(0,) * r] for poly in polys]
            structure = cokernel_structure(IntegerMatrix.hstack(matrices, tower.size))
            return structure.with_notes(notes + [f"Z^{tower.size} modulo {len(matrices)} integer relations"])
        if not polys:
            return AbelianStructure.countably_infinite(
                f"free of rank {tower.size} over a Laurent ring in {len(tower.remaining)} variable(s)").with_notes(notes)
        choice = _pivot(tower, polys)
        if choice is None and tower.size == 1 and len(gens) > 1 and not interreduced:
            interreduced = True
            rows = interreduce([[g] for g in gens], [0], config.max_reduction_rounds)
            gens = [row[0] for row in rows if not row[0].is_zero]
            notes.append("ideal generators interreduced by monomial multiples")
            continue
        if choice is None:
            if tower.size == 1 and len(polys) == 1:
                return AbelianStructure.countably_infinite(
                    "single relation without unit extremal coefficients leaves a module "
                    "that is not finitely generated").with_notes(notes)
            return AbelianStructure.unknown(
                f"no unit-extremal pivot among {len(polys)} relations at tower size {tower.size}").with_notes(notes)
        span, index, var = choice
        tower.eliminate(var, polys[index])
        notes.append(f"eliminate {default_variable_names(r)[var]} by a relation of span {span}")
        logger.debug(f"tower step: variable {var}, span {span}, size now {tower.size}")
        gens.pop(index)
    return AbelianStructure.unknown(f"tower elimination stopped after {max_steps} steps").with_notes(notes)


@dataclass
class HomologyRun:
    chain: ChainData
    kernel: List[ModuleVector]
    relations: List[ModuleVector]
    structure: AbelianStructure


def derived_abelianization(p: Presentation, m: AbMap, window: Optional[int] = None,
                           coeff_bound: Optional[int] = None) -> HomologyRun:
    """Full pipeline: chain, kernel basis, relation coordinates and quotient structure"""
    chain = build_chain(p, m)
    kernel = kernel_basis_d1(chain)
    relations = [kernel_coordinates(row, kernel) for row in chain.d2]
    structure = quotient_structure(chain, kernel, window, coeff_bound)
    return HomologyRun(chain=chain, kernel=kernel, relations=relations, structure=structure)
