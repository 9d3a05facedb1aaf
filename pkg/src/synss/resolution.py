"""Minimal free resolution of F2 over the Sq^1,Sq^2,Sq^4 subalgebra.

Stage-s generators in internal degree t biject with a basis of
Ext^{s,t}; products are computed by lifting cocycles to chain maps and
composing.  The construction is fully deterministic: bases are ordered
(generators by adjunction order, module monomials lexicographically) and
kernel vectors are consumed in a fixed order, so dimensions, boundaries
and product matrices reproduce bit-for-bit across runs and resumes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import exprs, steenrod
from .f2linalg import BitBasis, ColumnSolver, F2Vector
from .steenrod import MilnorElement, MilnorMonomial

CHECKPOINT_FORMAT = 1

# Ext algebra generators: the thirteen indecomposables with their
# (filtration, internal degree) positions; used as the naming contract.
DEFAULT_GENERATOR_TABLE: tuple[tuple[str, int, int], ...] = (
    ("h0", 1, 1),
    ("h1", 1, 2),
    ("h2", 1, 4),
    ("c0", 3, 11),
    ("w1", 4, 12),
    ("alpha", 3, 15),
    ("d0", 4, 18),
    ("beta", 3, 18),
    ("e0", 4, 21),
    ("g", 4, 24),
    ("gamma", 5, 30),
    ("delta", 7, 39),
    ("w2", 8, 56),
)


class RangeError(LookupError):
    """Query outside the computed region; the message names the extension needed."""


class CheckpointError(RuntimeError):
    pass


class ConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExtDegree:
    s: int
    t: int

    @property
    def stem(self) -> int:
        return self.t - self.s


@dataclass(frozen=True)
class ExtClass:
    s: int
    t: int
    coords: F2Vector
    name: Optional[str] = None

    @property
    def degree(self) -> ExtDegree:
        return ExtDegree(self.s, self.t)

    def is_zero(self) -> bool:
        return self.coords.bits == 0


def _adjunction_candidates(vectors: Sequence[int]) -> Sequence[int]:
    """Order in which kernel vectors are offered as new generators.

    Module-level so tests can patch it and confirm Ext dimensions do not
    depend on the choice.
    """
    return vectors


class _ModuleBasis:
    """Ordered basis of the degree-t part of a free stage."""

    __slots__ = ("entries", "offsets", "dim", "unit_positions", "gen_degrees", "t")

    def __init__(self, gen_degrees: Sequence[int], t: int):
        self.t = t
        self.offsets: list[int] = []
        self.entries: list[tuple[int, int]] = []  # (gen index, monomial index)
        self.unit_positions: dict[int, int] = {}
        self.gen_degrees = list(gen_degrees)
        pos = 0
        for i, tg in enumerate(gen_degrees):
            self.offsets.append(pos)
            d = t - tg
            if d < 0:
                continue
            n = steenrod.dim_in_degree(d)
            if d == 0 and n:
                self.unit_positions[i] = pos
            for k in range(n):
                self.entries.append((i, k))
            pos += n
        self.dim = pos


class Resolution:
    def __init__(self):
        # stage 0: one generator in degree 0 with empty boundary
        self._gen_degrees: list[list[int]] = [[0]]
        self._boundaries: list[list[tuple[tuple[int, MilnorElement], ...]]] = [[()]]
        self.s_max = 0
        self.t_max = 0
        self._basis_cache: dict[tuple[int, int], _ModuleBasis] = {}
        self._col_cache: dict[tuple[int, int], list[int]] = {}
        self._solver_cache: dict[tuple[int, int], ColumnSolver] = {}
        self._lift_cache: dict[tuple[int, int, int], dict] = {}
        self._mult_rows_cache: dict = {}

    # ------------------------------------------------------------------
    # structure queries

    def stages(self) -> int:
        return len(self._gen_degrees)

    def generator_degrees(self, s: int) -> list[int]:
        return list(self._gen_degrees[s])

    def generator_boundary(self, s: int, i: int) -> tuple[tuple[int, MilnorElement], ...]:
        return self._boundaries[s][i]

    def gens_at(self, s: int, t: int) -> list[int]:
        if s >= len(self._gen_degrees):
            return []
        return [i for i, tg in enumerate(self._gen_degrees[s]) if tg == t]

    def _check_range(self, s: int, t: int) -> None:
        if s < 0 or t < 0:
            raise RangeError(f"bidegree ({s},{t}) is negative")
        if s > self.s_max or t > self.t_max:
            raise RangeError(
                f"bidegree ({s},{t}) outside computed region; extend to "
                f"s_max >= {max(s, self.s_max)}, t_max >= {max(t, self.t_max)}"
            )

    def ext_dim(self, s: int, t: int) -> int:
        self._check_range(s, t)
        return len(self.gens_at(s, t))

    def module_basis(self, s: int, t: int) -> _ModuleBasis:
        key = (s, t)
        mb = self._basis_cache.get(key)
        if mb is None:
            mb = _ModuleBasis(self._gen_degrees[s], t)
            self._basis_cache[key] = mb
        return mb

    # ------------------------------------------------------------------
    # differential matrices

    def _columns(self, s: int, t: int) -> list[int]:
        """Columns of d_s at internal degree t, mapping into stage s-1."""
        key = (s, t)
        cols = self._col_cache.get(key)
        if cols is not None:
            return cols
        src = self.module_basis(s, t)
        tgt = self.module_basis(s - 1, t)
        cols = []
        for i, tg in enumerate(self._gen_degrees[s]):
            d = t - tg
            if d < 0:
                continue
            n = steenrod.dim_in_degree(d)
            block = [0] * n
            for j, coeff in self._boundaries[s][i]:
                shift = tgt.offsets[j]
                for u in coeff.terms:
                    tbl = steenrod.right_mult_columns(u, d)
                    for k in range(n):
                        if tbl[k]:
                            block[k] ^= tbl[k] << shift
            cols.extend(block)
        assert len(cols) == src.dim
        self._col_cache[key] = cols
        return cols

    def _solver(self, s: int, t: int) -> ColumnSolver:
        key = (s, t)
        sol = self._solver_cache.get(key)
        if sol is None:
            sol = ColumnSolver(self._columns(s, t), self.module_basis(s - 1, t).dim)
            self._solver_cache[key] = sol
        return sol

    def apply_differential(self, s: int, t: int, bits: int) -> int:
        """d_s applied to a degree-t element of stage s, both bit-packed."""
        cols = self._columns(s, t)
        out = 0
        v = bits
        while v:
            j = (v & -v).bit_length() - 1
            out ^= cols[j]
            v &= v - 1
        return out

    def _kernel_at(self, s_prev: int, t: int) -> list[int]:
        """Kernel of d_{s_prev} in degree t (the augmentation when s_prev=0)."""
        if s_prev == 0:
            dim = self.module_basis(0, t).dim
            if t == 0:
                return []
            return [1 << k for k in range(dim)]
        return self._solver(s_prev, t).kernel_combos()

    # ------------------------------------------------------------------
    # construction

    def extend_to(
        self,
        s_max: int,
        t_max: int,
        progress: Optional[Callable[[int, int, int], None]] = None,
        threads: int = 1,
    ) -> "Resolution":
        """Extend the minimal resolution through (s_max, t_max), resuming
        from whatever is already computed."""
        if s_max < 0 or t_max < 0:
            raise ValueError("bounds must be nonnegative")
        old_s, old_t = self.s_max, self.t_max
        if s_max <= old_s and t_max <= old_t:
            return self
        for s in range(1, s_max + 1):
            while len(self._gen_degrees) <= s:
                self._gen_degrees.append([])
                self._boundaries.append([])
            if threads > 1:
                self._prime_solvers(s - 1, t_max, threads)
            for t in range(s, t_max + 1):
                if s <= old_s and t <= old_t:
                    continue
                self._adjoin_at(s, t)
                if progress is not None:
                    progress(s, t, len(self.gens_at(s, t)))
        self.s_max = max(self.s_max, s_max)
        self.t_max = max(self.t_max, t_max)
        return self

    def _prime_solvers(self, s_prev: int, t_max: int, threads: int) -> None:
        # kernels of d_{s_prev} are independent across degrees once stage
        # s_prev is complete; warm their caches in a pool
        if s_prev == 0:
            return
        from concurrent.futures import ThreadPoolExecutor

        todo = [t for t in range(s_prev, t_max + 1) if (s_prev, t) not in self._solver_cache]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda t: self._solver(s_prev, t), todo))

    def _adjoin_at(self, s: int, t: int) -> None:
        kernel = self._kernel_at(s - 1, t)
        if not kernel:
            return
        image = BitBasis(self._columns(s, t))
        tgt = self.module_basis(s - 1, t)
        new_vectors = []
        for v in _adjunction_candidates(kernel):
            if image.add(v):
                new_vectors.append(v)
        if not new_vectors:
            return
        for v in new_vectors:
            self._gen_degrees[s].append(t)
            self._boundaries[s].append(self._decode_boundary(tgt, v))
        self._invalidate_stage(s)

    def _decode_boundary(
        self, tgt: _ModuleBasis, v: int
    ) -> tuple[tuple[int, MilnorElement], ...]:
        per_gen: dict[int, set[MilnorMonomial]] = {}
        bits = v
        while bits:
            pos = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            j, k = tgt.entries[pos]
            d_mono = tgt.t - tgt.gen_degrees[j]
            mono = steenrod.basis_in_degree(d_mono)[k]
            if mono.degree == 0:
                raise ConsistencyError(
                    "unit coefficient in a boundary; resolution not minimal"
                )
            per_gen.setdefault(j, set()).add(mono)
        return tuple(
            (j, MilnorElement(frozenset(per_gen[j]))) for j in sorted(per_gen)
        )

    def _invalidate_stage(self, s: int) -> None:
        for key in [k for k in self._basis_cache if k[0] == s]:
            del self._basis_cache[key]
        for key in [k for k in self._col_cache if k[0] == s]:
            del self._col_cache[key]
        for key in [k for k in self._solver_cache if k[0] == s]:
            del self._solver_cache[key]

    # ------------------------------------------------------------------
    # products via chain-map lifts

    def class_by_index(self, s: int, t: int, index: int, name: Optional[str] = None) -> ExtClass:
        n = self.ext_dim(s, t)
        if not 0 <= index < n:
            raise IndexError(f"basis index {index} out of range at ({s},{t})")
        return ExtClass(s, t, F2Vector(n, 1 << index), name)

    def unit_class(self) -> ExtClass:
        return ExtClass(0, 0, F2Vector(1, 1), "1")

    def _gen_positions(self, s: int, t: int) -> list[int]:
        """Positions of (generator, unit monomial) pairs for degree-t
        stage-s generators inside module_basis(s, t)."""
        mb = self.module_basis(s, t)
        return [mb.unit_positions[i] for i in self.gens_at(s, t)]

    def unit_projection(self, s: int, t: int, bits: int) -> int:
        """Project a module element onto coordinates over degree-t generators."""
        out = 0
        for k, pos in enumerate(self._gen_positions(s, t)):
            if (bits >> pos) & 1:
                out |= 1 << k
        return out

    def _lift_levels(self, cls: ExtClass, level: int) -> dict[int, dict[int, int]]:
        """Chain-map lift of the cocycle cls through the given level.

        Level k maps stage (cls.s + k) generators to elements of stage k in
        degree (t_gen - cls.t); stored bit-packed per generator index.
        """
        key = (cls.s, cls.t, cls.coords.bits)
        levels = self._lift_cache.get(key)
        if levels is None:
            levels = {}
            self._lift_cache[key] = levels
        if 0 not in levels:
            lvl0 = {}
            gens = self.gens_at(cls.s, cls.t)
            for k, i in enumerate(gens):
                if (cls.coords.bits >> k) & 1:
                    lvl0[i] = 1  # the unit of stage 0 in degree 0
            levels[0] = lvl0
        for k in range(1, level + 1):
            if k in levels:
                continue
            src_stage = cls.s + k
            if src_stage >= len(self._gen_degrees):
                raise RangeError(
                    f"lift needs stage {src_stage}; extend the resolution"
                )
            lvl = {}
            prev = levels[k - 1]
            for gi, tg in enumerate(self._gen_degrees[src_stage]):
                d = tg - cls.t
                if d < 0:
                    continue
                target_mb = self.module_basis(k - 1, d)
                b = 0
                for j, coeff in self._boundaries[src_stage][gi]:
                    vj = prev.get(j, 0)
                    if vj == 0:
                        continue
                    dj = self._gen_degrees[src_stage - 1][j] - cls.t
                    b ^= self._module_mult(coeff, k - 1, dj, vj, target_mb)
                if b == 0:
                    lvl[gi] = 0
                    continue
                x = self._solver(k, d).solve(b)
                if x is None:
                    raise ConsistencyError(
                        f"lift failed at stage {k}, degree {d}; resolution inexact?"
                    )
                lvl[gi] = x
            levels[k] = lvl
        return levels

    def _module_mult(
        self, coeff: MilnorElement, stage: int, d_src: int, vbits: int,
        target_mb: _ModuleBasis,
    ) -> int:
        """coeff * (stage-`stage` element of degree d_src), bit-packed in
        degree d_src + deg(coeff)."""
        src_mb = self.module_basis(stage, d_src)
        out = 0
        v = vbits
        while v:
            pos = (v & -v).bit_length() - 1
            v &= v - 1
            gen_l, mono_idx = src_mb.entries[pos]
            d_m = d_src - self._gen_degrees[stage][gen_l]
            shift = target_mb.offsets[gen_l]
            for u in coeff.terms:
                out ^= steenrod.left_mult_columns(u, d_m)[mono_idx] << shift
        return out

    def multiply(self, a: ExtClass, b: ExtClass) -> ExtClass:
        """Yoneda product a*b (commutative over F2)."""
        s, t = a.s + b.s, a.t + b.t
        self._check_range(s, t)
        if a.is_zero() or b.is_zero():
            return ExtClass(s, t, F2Vector(self.ext_dim(s, t), 0))
        rows = self.mult_rows(b, a.s, a.t)
        out = 0
        for k, mask in enumerate(rows):
            if bin(a.coords.bits & mask).count("1") & 1:
                out |= 1 << k
        return ExtClass(s, t, F2Vector(self.ext_dim(s, t), out))

    def mult_rows(self, b: ExtClass, s: int, t: int) -> list[int]:
        """Multiplication by b as masks: entry k is the source-coordinate
        mask whose parity gives coordinate k of b*x for x in Ext^{s,t}."""
        key = (b.s, b.t, b.coords.bits, s, t)
        rows = self._mult_rows_cache.get(key)
        if rows is not None:
            return rows
        self._check_range(s + b.s, t + b.t)
        levels = self._lift_levels(b, s)
        rows = []
        for gi in self.gens_at(s + b.s, t + b.t):
            v = levels[s].get(gi, 0)
            rows.append(self.unit_projection(s, t, v))
        self._mult_rows_cache[key] = rows
        return rows

    # ------------------------------------------------------------------
    # checkpointing

    def to_document(self) -> dict:
        stages = []
        for s in range(len(self._gen_degrees)):
            gens = []
            for i, tg in enumerate(self._gen_degrees[s]):
                bnd = [
                    [j, sorted([m.r1, m.r2, m.r3] for m in coeff.terms)]
                    for j, coeff in self._boundaries[s][i]
                ]
                gens.append({"t": tg, "boundary": bnd})
            stages.append({"s": s, "generators": gens})
        return {
            "format_version": CHECKPOINT_FORMAT,
            "algebra": "mod-2 Steenrod subalgebra, Milnor profile (3,2,1)",
            "basis_order": "lex (r1,r2,r3); generators in adjunction order",
            "s_max": self.s_max,
            "t_max": self.t_max,
            "stages": stages,
        }

    def save_checkpoint(self, path) -> None:
        doc = self.to_document()
        data = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
        with open(path, "w", encoding="ascii") as fh:
            fh.write(data)

    @classmethod
    def from_document(cls, doc: dict) -> "Resolution":
        if not isinstance(doc, dict) or "format_version" not in doc:
            raise CheckpointError("not a resolution checkpoint (missing header)")
        if doc["format_version"] != CHECKPOINT_FORMAT:
            raise CheckpointError(
                f"checkpoint format {doc['format_version']} unsupported "
                f"(expected {CHECKPOINT_FORMAT})"
            )
        res = cls()
        try:
            stages = doc["stages"]
            res._gen_degrees = []
            res._boundaries = []
            for block in stages:
                s = block["s"]
                if s != len(res._gen_degrees):
                    raise CheckpointError(f"stage block {s} out of order")
                degs, bnds = [], []
                for gen in block["generators"]:
                    degs.append(int(gen["t"]))
                    bnd = []
                    for j, monos in gen["boundary"]:
                        elem = MilnorElement(
                            frozenset(MilnorMonomial(*m) for m in monos)
                        )
                        bnd.append((int(j), elem))
                    bnds.append(tuple(bnd))
                res._gen_degrees.append(degs)
                res._boundaries.append(bnds)
            res.s_max = int(doc["s_max"])
            res.t_max = int(doc["t_max"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise CheckpointError(f"malformed checkpoint block: {exc}") from exc
        if not res._gen_degrees or res._gen_degrees[0] != [0]:
            raise CheckpointError("stage 0 must hold the single degree-0 generator")
        return res

    @classmethod
    def load_checkpoint(cls, path) -> "Resolution":
        try:
            with open(path, "r", encoding="ascii") as fh:
                raw = fh.read()
        except OSError as exc:
            raise CheckpointError(f"cannot read checkpoint: {exc}") from exc
        if not raw.strip():
            raise CheckpointError("checkpoint file is empty")
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"truncated or corrupt checkpoint: {exc}") from exc
        return cls.from_document(doc)


def extend(
    s_max: int,
    t_max: int,
    checkpoint: Optional[str] = None,
    threads: int = 1,
    progress: Optional[Callable[[int, int, int], None]] = None,
) -> Resolution:
    """Build (or resume from ``checkpoint`` and extend) a resolution."""
    if checkpoint is not None:
        res = Resolution.load_checkpoint(checkpoint)
    else:
        res = Resolution()
    res.extend_to(s_max, t_max, progress=progress, threads=threads)
    return res


# ---------------------------------------------------------------------------
# naming and the indecomposable census


@dataclass
class CensusEntry:
    s: int
    t: int
    dim: int
    decomposable_dim: int
    new_names: list[str]

    @property
    def indecomposables(self) -> int:
        return self.dim - self.decomposable_dim


class NamingTable:
    """Named generators of the Ext algebra plus product-name lookups.

    Built by a single ascending sweep over the computed region: at each
    bidegree the span of products of previously discovered generators is
    measured, and any complement is adjoined as new (named or positional)
    generators.
    """

    def __init__(
        self,
        res: Resolution,
        gen_table: Sequence[tuple[str, int, int]] = DEFAULT_GENERATOR_TABLE,
    ):
        self.res = res
        self.gen_degrees: dict[str, tuple[int, int]] = {
            name: (s, t) for name, s, t in gen_table
        }
        self.generators: dict[str, ExtClass] = {}
        self.census: list[CensusEntry] = []
        self._mono_cache: dict[tuple[tuple[str, int], ...], ExtClass] = {}
        self._class_names: dict[tuple[int, int, int], str] = {}
        self._build(gen_table)

    # -- construction ---------------------------------------------------

    def _build(self, gen_table) -> None:
        res = self.res
        named_at: dict[tuple[int, int], str] = {
            (s, t): name for name, s, t in gen_table
        }
        missing = [
            (name, s, t)
            for name, s, t in gen_table
            if s <= res.s_max and t <= res.t_max and res.ext_dim(s, t) == 0
        ]
        if missing:
            raise ConsistencyError(
                f"expected nonzero Ext at named bidegrees, found zero: {missing}"
            )
        discovered: list[ExtClass] = []
        for t in range(0, res.t_max + 1):
            for s in range(0, min(t, res.s_max) + 1):
                if s == 0:
                    continue
                dim = res.ext_dim(s, t)
                if dim == 0:
                    continue
                span = BitBasis()
                for g in discovered:
                    ds, dt = s - g.s, t - g.t
                    if ds < 0 or dt <= 0:
                        continue
                    n_src = res.ext_dim(ds, dt)
                    if n_src == 0:
                        continue
                    rows = res.mult_rows(g, ds, dt)
                    for k in range(n_src):
                        bits = 0
                        for gi, mask in enumerate(rows):
                            if (mask >> k) & 1:
                                bits |= 1 << gi
                        if bits:
                            span.add(bits)
                dec_dim = span.dim
                new_names: list[str] = []
                if dec_dim < dim:
                    idx = 0
                    for k in range(dim):
                        if span.add(1 << k):
                            if (s, t) in named_at and idx == 0 and dim - dec_dim == 1:
                                name = named_at[(s, t)]
                            else:
                                name = f"x_{s}_{t}_{idx}"
                            cls = ExtClass(s, t, F2Vector(dim, 1 << k), name)
                            self.generators[name] = cls
                            self.gen_degrees.setdefault(name, (s, t))
                            discovered.append(cls)
                            new_names.append(name)
                            idx += 1
                if dec_dim < dim or (s, t) in named_at:
                    self.census.append(CensusEntry(s, t, dim, dec_dim, new_names))
        # seed caches with the unit and the generators
        self._mono_cache[()] = res.unit_class()
        for name, cls in self.generators.items():
            self._mono_cache[((name, 1),)] = cls
            self._class_names[(cls.s, cls.t, cls.coords.bits)] = name

    # -- evaluation -----------------------------------------------------

    def static_degree(self, text: str) -> tuple[int, int]:
        """(s, t) of an expression from name degrees alone (no evaluation)."""
        terms = exprs.parse_expression(text)
        if not terms:
            raise exprs.ExprError(f"expression {text!r} is zero; no degree")
        degs = set()
        for term in terms:
            if term.tau:
                raise exprs.ExprError("tau factor not allowed in Ext expressions")
            s = t = 0
            for name, e in term.factors:
                if name not in self.gen_degrees:
                    raise exprs.ExprError(f"unknown generator {name!r}")
                gs, gt = self.gen_degrees[name]
                s += gs * e
                t += gt * e
            degs.add((s, t))
        if len(degs) != 1:
            raise exprs.ExprError(
                f"expression {text!r} mixes bidegrees {sorted(degs)}"
            )
        return degs.pop()

    def eval_monomial(self, key: tuple[tuple[str, int], ...]) -> ExtClass:
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        # peel one factor (alphabetically first) and recurse
        name, e = key[0]
        rest = ((name, e - 1),) + key[1:] if e > 1 else key[1:]
        rest = tuple((n, x) for n, x in rest if x > 0)
        base = self.eval_monomial(rest)
        g = self.generators.get(name)
        if g is None:
            raise exprs.ExprError(f"unknown generator {name!r}")
        out = self.res.multiply(g, base)
        self._mono_cache[key] = out
        return out

    def eval_ext(self, text: str) -> ExtClass:
        """Evaluate an Ext expression to a class (RangeError outside region)."""
        terms = exprs.parse_expression(text)
        if not terms:
            raise exprs.ExprError(f"cannot evaluate the zero expression {text!r}")
        s, t = self.static_degree(text)
        self.res._check_range(s, t)
        bits = 0
        for term in terms:
            cls = self.eval_monomial(exprs.monomial_key(term))
            if (cls.s, cls.t) != (s, t):
                raise exprs.ExprError(f"term {term} lands at ({cls.s},{cls.t})")
            bits ^= cls.coords.bits
        return ExtClass(s, t, F2Vector(self.res.ext_dim(s, t), bits), text)

    # -- reverse lookup ---------------------------------------------------

    def build_monomial_table(
        self, s_max: int, t_max: int
    ) -> dict[tuple[int, int], list[tuple[tuple[tuple[str, int], ...], int]]]:
        """All nonzero generator monomials per bidegree (key, coord bits).

        Breadth-first over total internal degree, pruning monomials whose
        class vanishes; also fills the preferred-name table for classes
        that equal a single monomial.
        """
        table: dict[tuple[int, int], list] = {}
        seen: dict[tuple, int] = {(): 1}
        frontier: list[tuple[tuple, int, int, int]] = [((), 1, 0, 0)]
        gens = sorted(
            self.generators.items(), key=lambda kv: (self.gen_degrees[kv[0]], kv[0])
        )
        while frontier:
            new_frontier = []
            for key, bits, s, t in frontier:
                for name, g in gens:
                    gs, gt = g.s, g.t
                    ns, nt = s + gs, t + gt
                    if ns > s_max or nt > t_max:
                        continue
                    counts = dict(key)
                    counts[name] = counts.get(name, 0) + 1
                    nkey = tuple(sorted(counts.items()))
                    if nkey in seen:
                        continue
                    rows = self.res.mult_rows(g, s, t)
                    nbits = 0
                    for gi, mask in enumerate(rows):
                        if bin(mask & bits).count("1") & 1:
                            nbits |= 1 << gi
                    seen[nkey] = nbits
                    if nbits == 0:
                        continue
                    table.setdefault((ns, nt), []).append((nkey, nbits))
                    new_frontier.append((nkey, nbits, ns, nt))
            frontier = sorted(new_frontier, key=lambda item: item[0])
        for (s, t), monos in table.items():
            for key, bits in sorted(monos, key=_name_sort_key):
                self._class_names.setdefault((s, t, bits), _key_to_name(key))
        return table

    def class_name(self, s: int, t: int, bits: int) -> str:
        named = self._class_names.get((s, t, bits))
        if named is not None:
            return named
        return f"x_{s}_{t}[{bits:x}]"


def _name_sort_key(item):
    key, _ = item
    total = sum(e for _, e in key)
    return (total, _key_to_name(key))


def _key_to_name(key: tuple[tuple[str, int], ...]) -> str:
    if not key:
        return "1"
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in key)


def name_generators(
    res: Resolution,
    gen_table: Sequence[tuple[str, int, int]] = DEFAULT_GENERATOR_TABLE,
) -> NamingTable:
    """Run the census and attach the canonical generator names."""
    return NamingTable(res, gen_table)
