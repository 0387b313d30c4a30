"""FastAPI service wrapping the library.

One process holds a cache of constructed systems (and, through them, their
enumerations, Schubert data and Soergel modules), so repeated queries against
the same group amortise the expensive exact constructions.  All payloads are
JSON; field elements travel as canonical strings in the generator c.

Error contract: invalid input -> 400 {"error": {"code": "invalid_input"}},
enumeration bound exceeded -> 409 {"code": "group_infinite"}, internal
invariant violations -> 500 {"code": "internal"}.  The CLI maps these to its
exit codes 2 / 3 / 4.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import bsmod
from .coxeter import (
    DEFAULT_BOUND,
    CoxeterSystem,
    canonical_group_label,
    descriptor_to_matrix,
    enumerate_group,
    matrix_from_json,
    shared_system,
)
from .errors import (
    CoxHodgeError,
    GroupInfiniteError,
    InternalInvariantError,
    InvalidInputError,
)
from .hodge import AmpleWeight, run_check
from .polyring import Polynomial, format_polynomial, schubert_calculus

THREADS_ENV = "COXHODGE_THREADS"


# ---------------------------------------------------------------------------
# request models

class GroupSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    type: str | None = None
    matrix: list[list[int | str]] | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.type is None) == (self.matrix is None):
            raise ValueError("exactly one of 'type' and 'matrix' is required")
        return self

    def resolve(self) -> tuple[CoxeterSystem, str]:
        if self.type is not None:
            matrix = descriptor_to_matrix(self.type)
        else:
            matrix = matrix_from_json(self.matrix)
        label = canonical_group_label(self.type, matrix)
        return shared_system(matrix), label


class RootsRequest(BaseModel):
    group: GroupSpec
    bound: int = DEFAULT_BOUND


class SchubertRequest(BaseModel):
    group: GroupSpec
    bound: int = DEFAULT_BOUND


class DecomposeRequest(BaseModel):
    group: GroupSpec
    word: list[int]
    bound: int = DEFAULT_BOUND
    include_modules: bool = False


class CheckRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    group: GroupSpec
    word: list[int] | None = None
    all: bool = False
    lam: list[str] | str = Field(default="rho", alias="lambda")
    full: bool = False
    bound: int = DEFAULT_BOUND
    width: int | None = None


# ---------------------------------------------------------------------------
# helpers

def _word_internal(word, rank) -> tuple:
    out = []
    for s in word:
        if not isinstance(s, int) or not 1 <= s <= rank:
            raise InvalidInputError(f"generator index {s} out of range 1..{rank}")
        out.append(s - 1)
    return tuple(out)


def _word_external(word) -> list:
    return [s + 1 for s in word]


def _coords(values) -> list[str]:
    return [str(v) for v in values]


def _weight(system: CoxeterSystem, lam) -> AmpleWeight:
    if isinstance(lam, str):
        if lam != "rho":
            raise InvalidInputError("lambda must be 'rho' or a coordinate list")
        return AmpleWeight.rho(system)
    coords = []
    for v in lam:
        try:
            coords.append(Fraction(str(v)))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"bad weight coordinate {v!r}") from exc
    if len(coords) != system.rank:
        raise InvalidInputError("weight coordinate count differs from rank")
    return AmpleWeight(system, coords)


def _summand_tag(system: CoxeterSystem, normalised, bound) -> str:
    """D_{word} when the summand matches a Soergel module, else a dimension tag."""
    try:
        enum = enumerate_group(system, bound)
    except GroupInfiniteError:
        return "M(dim %d)" % normalised.total_dim
    target_length = normalised.top_degree // 2
    for el in enum.elements:
        if el.length != target_length:
            continue
        candidate = bsmod.soergel_module(system, el.reduced_word)
        if candidate.graded_dims() == normalised.graded_dims() and \
                bsmod.isomorphic(candidate, normalised):
            word = "".join(str(s + 1) for s in el.reduced_word) or "id"
            return "D_{%s}" % word
    return "M(dim %d)" % normalised.total_dim


def _width(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get(THREADS_ENV)
    if env and env.isdigit():
        return max(1, int(env))
    return 1


# ---------------------------------------------------------------------------
# application

def create_app() -> FastAPI:
    app = FastAPI(title="coxhodge", version="0.1.0")

    @app.exception_handler(InvalidInputError)
    async def _invalid(request: Request, exc: InvalidInputError):
        return JSONResponse(status_code=400,
                            content={"error": {"code": "invalid_input",
                                               "message": str(exc)}})

    @app.exception_handler(GroupInfiniteError)
    async def _infinite(request: Request, exc: GroupInfiniteError):
        return JSONResponse(status_code=409,
                            content={"error": {"code": "group_infinite",
                                               "message": str(exc)}})

    @app.exception_handler(InternalInvariantError)
    async def _internal(request: Request, exc: InternalInvariantError):
        return JSONResponse(status_code=500,
                            content={"error": {"code": "internal",
                                               "message": str(exc)}})

    @app.exception_handler(CoxHodgeError)
    async def _other(request: Request, exc: CoxHodgeError):
        return JSONResponse(status_code=500,
                            content={"error": {"code": "internal",
                                               "message": str(exc)}})

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/v1/roots")
    def roots(req: RootsRequest):
        system, label = req.group.resolve()
        enum = enumerate_group(system, req.bound)
        roots = enum.positive_roots()
        return {
            "group": label,
            "rank": system.rank,
            "conductor": system.ctx.N,
            "cartan": [[str(e) for e in row] for row in system.cartan.rows],
            "count": len(roots),
            "roots": [
                {"coords": _coords(r.coords), "coroot": _coords(r.coroot),
                 "reflection": _word_external(r.reflection.reduced_word),
                 "length": r.reflection.length}
                for r in roots
            ],
        }

    @app.post("/v1/schubert")
    def schubert(req: SchubertRequest):
        system, label = req.group.resolve()
        enumerate_group(system, req.bound)
        calc = schubert_calculus(system)
        enum = calc.enum
        elements = enum.elements
        classes = []
        for el in elements:
            cls = calc.schubert_class(el)
            classes.append({
                "word": _word_external(el.reduced_word),
                "length": el.length,
                "degree": cls.degree,
                "poly": format_polynomial(cls.poly),
            })
        w0 = enum.w0
        order = {el.key: i for i, el in enumerate(elements)}
        pairing = [[0] * len(elements) for _ in elements]
        for i, x in enumerate(elements):
            pairing[i][order[enum.lookup(x * w0).key]] = 1
        edges = []
        for x in elements:
            for root, tx in enum.lower_covers(x):
                label_poly = Polynomial.linear(system.ctx, root.coroot)
                edges.append({
                    "source": _word_external(x.reduced_word),
                    "target": _word_external(tx.reduced_word),
                    "coroot": _coords(root.coroot),
                    "label": format_polynomial(label_poly),
                })
        return {
            "group": label,
            "order": len(elements),
            "w0": _word_external(w0.reduced_word),
            "classes": classes,
            "pairing": pairing,
            "edges": edges,
        }

    @app.post("/v1/decompose")
    def decompose_endpoint(req: DecomposeRequest):
        system, label = req.group.resolve()
        word = _word_internal(req.word, system.rank)
        module = bsmod.bs_module(system, word)
        dec = bsmod.decompose(module)
        groups = dec.multiplicities()
        summands = []
        parts = []
        for normalised, shift, count in groups:
            tag = _summand_tag(system, normalised, req.bound)
            record = {
                "tag": tag,
                "shift": shift,
                "multiplicity": count,
                "graded_dims": sorted(normalised.graded_dims().items()),
            }
            if req.include_modules:
                record["module"] = bsmod.module_to_json(normalised)
            summands.append(record)
            piece = tag + (f"({shift})" if shift else "")
            if count > 1:
                piece += f"^{count}"
            parts.append(piece)
        return {
            "group": label,
            "word": list(req.word),
            "total_dim": module.total_dim,
            "summands": summands,
            "text": " ⊕ ".join(parts),
        }

    @app.post("/v1/check")
    def check(req: CheckRequest):
        system, label = req.group.resolve()
        weight = _weight(system, req.lam)
        if req.all == (req.word is not None):
            raise InvalidInputError("provide exactly one of 'word' or 'all'")
        jobs = []
        if req.all:
            enum = enumerate_group(system, req.bound)
            jobs = [el.reduced_word for el in enum.elements]
        else:
            jobs = [_word_internal(req.word, system.rank)]

        def one(word):
            if req.full:
                module = bsmod.bs_module(system, word)
                bsmod.intersection_form(module)
                module.materialise_actions()
                summand = "full"
            else:
                module = bsmod.soergel_module(system, word)
                summand = "D_w"
            return run_check(module, weight, group=label, word=word,
                             summand=summand).to_dict()

        width = _width(req.width)
        if width > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=width) as pool:
                reports = list(pool.map(one, jobs))
        else:
            reports = [one(word) for word in jobs]
        reports.sort(key=lambda r: (len(r["word"]), r["word"]))
        return {"group": label, "reports": reports}

    return app


app = create_app()
