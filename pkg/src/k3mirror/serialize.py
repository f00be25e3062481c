"""JSON documents for lattices, embeddings, pairs, periods and scenarios.

Integers are written as decimal strings and rationals as ``"p/q"`` strings so
that no consumer truncates them to 64 bits. Readers accept plain JSON numbers
for integers as well. Key order is fixed, which makes output byte-stable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .exact import IntMatrix
from .lattice import GramLattice, LatticeError, lattice_E8, lattice_K3, lattice_U
from .mirror import MirrorScenario, build_scenario
from .periods import ComplexifiedKahlerClass, PeriodPoint
from .sublattice import Embedding, HyperbolicPair

NAMED_LATTICES = {"K3": lattice_K3, "U": lattice_U, "E8": lattice_E8}


class DocumentError(ValueError):
    """Malformed or inconsistent JSON document."""


def _int(a) -> int:
    if isinstance(a, bool):
        raise DocumentError(f"expected an integer, got {a!r}")
    if isinstance(a, int):
        return a
    if isinstance(a, str):
        try:
            return int(a.strip())
        except ValueError:
            pass
    raise DocumentError(f"expected an integer, got {a!r}")


def _rat(a) -> Fraction:
    if isinstance(a, bool) or isinstance(a, float):
        raise DocumentError(f"expected an exact rational, got {a!r}")
    try:
        return Fraction(a) if isinstance(a, (int, str)) else Fraction(_int(a))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {a!r}") from exc


def int_vector(v) -> tuple[int, ...]:
    if not isinstance(v, list):
        raise DocumentError(f"expected a list of integers, got {v!r}")
    return tuple(_int(a) for a in v)


def rat_vector(v) -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise DocumentError(f"expected a list of rationals, got {v!r}")
    return tuple(_rat(a) for a in v)


def int_matrix(rows, ncols: int | None = None) -> IntMatrix:
    if not isinstance(rows, list):
        raise DocumentError("matrix must be a list of rows")
    try:
        return IntMatrix([int_vector(r) for r in rows], ncols=ncols)
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from exc


def fmt_int(a: int) -> str:
    return str(int(a))


def fmt_rat(q) -> str:
    return str(Fraction(q))


def fmt_matrix(m) -> list[list[str]]:
    return [[fmt_int(a) for a in row] for row in m]


def fmt_vector(v: Sequence) -> list[str]:
    return [fmt_rat(a) for a in v]


# ---------------------------------------------------------------------------
# lattices and embeddings
# ---------------------------------------------------------------------------

def lattice_from_doc(doc, allow_odd: bool = False) -> GramLattice:
    if isinstance(doc, str):
        if doc not in NAMED_LATTICES:
            raise DocumentError(f"unknown lattice name {doc!r}")
        return NAMED_LATTICES[doc]()
    if not isinstance(doc, dict) or "gram" not in doc:
        raise DocumentError('lattice document needs a "gram" key')
    allow_odd = allow_odd or bool(doc.get("allow_odd", False))
    g = int_matrix(doc["gram"])
    if g.nrows != g.ncols:
        raise DocumentError("Gram matrix must be square")
    return GramLattice(g, str(doc.get("label", "")), allow_odd)


def lattice_to_doc(lat: GramLattice) -> dict:
    return {"label": lat.label, "gram": fmt_matrix(lat.gram)}


def embedding_from_doc(doc, ambient: GramLattice | None = None) -> Embedding:
    if isinstance(doc, dict) and "ambient" in doc:
        ambient = lattice_from_doc(doc["ambient"])
    if ambient is None:
        raise DocumentError("embedding document needs an ambient lattice")
    rows = doc["basis"] if isinstance(doc, dict) else doc
    return Embedding(ambient, int_matrix(rows, ncols=ambient.rank), doc.get("label", "") if isinstance(doc, dict) else "")


def embedding_to_doc(s: Embedding, ambient_name: str | None = None) -> dict:
    return {
        "ambient": ambient_name if ambient_name else lattice_to_doc(s.ambient),
        "basis": fmt_matrix(s.basis),
    }


def pair_from_doc(doc, home: GramLattice) -> HyperbolicPair:
    if not isinstance(doc, dict) or "E" not in doc or "Eprime" not in doc:
        raise DocumentError('pair document needs "E" and "Eprime"')
    return HyperbolicPair(home.vector(int_vector(doc["E"])), home.vector(int_vector(doc["Eprime"])))


def pair_to_doc(p: HyperbolicPair) -> dict:
    return {"E": [fmt_int(a) for a in p.e.coords], "Eprime": [fmt_int(a) for a in p.e_prime.coords]}


# ---------------------------------------------------------------------------
# periods and Kähler classes
# ---------------------------------------------------------------------------

def period_from_doc(doc, home: GramLattice) -> PeriodPoint:
    if not isinstance(doc, dict) or "x" not in doc or "y" not in doc:
        raise DocumentError('period document needs "x" and "y"')
    return PeriodPoint(rat_vector(doc["x"]), rat_vector(doc["y"]), home)


def period_to_doc(p: PeriodPoint) -> dict:
    return {"x": fmt_vector(p.x), "y": fmt_vector(p.y)}


def kahler_from_doc(doc, home: GramLattice) -> ComplexifiedKahlerClass:
    if not isinstance(doc, dict) or "omega" not in doc:
        raise DocumentError('Kähler document needs "omega"')
    w = rat_vector(doc["omega"])
    b = rat_vector(doc["B"]) if "B" in doc else (Fraction(0),) * len(w)
    cone = rat_vector(doc["cone_ref"]) if doc.get("cone_ref") is not None else None
    return ComplexifiedKahlerClass(b, w, home, cone)


def kahler_to_doc(k: ComplexifiedKahlerClass) -> dict:
    return {
        "B": fmt_vector(k.b),
        "omega": fmt_vector(k.w),
        "cone_ref": fmt_vector(k.cone_ref) if k.cone_ref is not None else None,
    }


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def _ambient_name(doc: dict) -> str | None:
    amb = doc.get("ambient")
    return amb if isinstance(amb, str) else None


def scenario_from_doc(doc: dict) -> MirrorScenario:
    """Build a scenario from ``ambient``, ``M``, ``P`` and optional ``Pprime``.

    ``Mcheck``/``Mprime`` lattice documents, when present, are taken as
    declared values of the abstract lattices; everything else is derived.
    """
    if not isinstance(doc, dict):
        raise DocumentError("scenario document must be an object")
    for key in ("ambient", "M", "P"):
        if key not in doc:
            raise DocumentError(f'scenario document needs "{key}"')
    ambient = lattice_from_doc(doc["ambient"], allow_odd=bool(doc.get("allow_odd", False)))
    m_doc = doc["M"]
    m_rows = m_doc["basis"] if isinstance(m_doc, dict) else m_doc
    m_basis = int_matrix(m_rows, ncols=ambient.rank)
    p = pair_from_doc(doc["P"], ambient)
    pp = pair_from_doc(doc["Pprime"], ambient) if doc.get("Pprime") is not None else None
    cone = rat_vector(doc["cone_ref"]) if doc.get("cone_ref") is not None else None
    declared = {}
    for key, name in (("Mcheck", "m_check"), ("Mprime", "m_prime")):
        if doc.get(key) is not None:
            declared[name] = lattice_from_doc(doc[key])
    return build_scenario(ambient, m_basis, p, pp, cone_ref=cone, **declared)


def scenario_to_doc(s: MirrorScenario, ambient_name: str | None = None) -> dict:
    """Canonical document: inputs first, then the derived lattices."""
    doc: dict[str, Any] = {
        "ambient": ambient_name if ambient_name else lattice_to_doc(s.ambient),
        "M": fmt_matrix(s.m_pol.basis),
        "P": pair_to_doc(s.p_slag),
        "Pprime": pair_to_doc(s.p_prime) if s.p_prime is not None else None,
        "cone_ref": fmt_vector(s.cone_ref) if s.cone_ref is not None else None,
        "T": _derived(s.t_lat, "T"),
        "Mcheck": {"label": s.m_check.label, "gram": fmt_matrix(s.m_check.gram),
                   "basis": fmt_matrix(s.m_check_embedding.basis)},
        "Mprime": None,
        "R": _derived(s.r_core, "R") if s.r_core is not None else None,
    }
    if s.m_prime is not None:
        doc["Mprime"] = {"label": s.m_prime.label, "gram": fmt_matrix(s.m_prime.gram),
                         "basis": fmt_matrix(s.m_prime_embedding.basis)}
    return doc


def _derived(e: Embedding, label: str) -> dict:
    return {"label": label, "gram": fmt_matrix(e.induced_gram), "basis": fmt_matrix(e.basis)}


def load_scenario_file(doc: dict) -> tuple[MirrorScenario, dict]:
    """Scenario plus the optional period inputs of the ``mu`` command.

    Recognized extra keys: ``period`` (period document, ambient coordinates
    unless ``"frame": "T"``), ``complexified_kahler`` (Kähler document in
    ambient coordinates; its mirror-map image is used when ``period`` is
    absent) and ``kahler`` (the Kähler class of X, a rational vector in M⊗Q).
    """
    s = scenario_from_doc(doc)
    extras: dict[str, Any] = {}
    if doc.get("period") is not None:
        pdoc = doc["period"]
        home = s.t_lat.lattice() if isinstance(pdoc, dict) and pdoc.get("frame") == "T" else s.ambient
        extras["period"] = period_from_doc(pdoc, home)
    if doc.get("complexified_kahler") is not None:
        extras["complexified_kahler"] = kahler_from_doc(doc["complexified_kahler"], s.ambient)
    if doc.get("kahler") is not None:
        extras["kahler"] = rat_vector(doc["kahler"])
    return s, extras


__all__ = [
    "DocumentError",
    "LatticeError",
    "embedding_from_doc",
    "embedding_to_doc",
    "kahler_from_doc",
    "kahler_to_doc",
    "lattice_from_doc",
    "lattice_to_doc",
    "load_scenario_file",
    "pair_from_doc",
    "pair_to_doc",
    "period_from_doc",
    "period_to_doc",
    "scenario_from_doc",
    "scenario_to_doc",
]
